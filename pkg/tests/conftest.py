import random

import pytest

from hintgan.align import Story
from hintgan.align.aligner import AlignedAssertion
from hintgan.hints import TrainingExample
from hintgan.kb import Assertion


def make_assertion(subject="dog", relation="IsA", relation_text="is a",
                   object="animal", specificity="specific", source="conceptnet",
                   id="conceptnet:0", glucose_dimension=None):
    return Assertion(
        id=id,
        source=source,
        subject=subject,
        relation=relation,
        relation_text=relation_text,
        object=object,
        specificity=specificity,
        glucose_dimension=glucose_dimension,
    )


def make_aligned(a, story_id="st1", sentence_index=1, story_distance=0.1,
                 sentence_distance=0.1):
    return AlignedAssertion(
        assertion=a,
        story_id=story_id,
        sentence_index=sentence_index,
        story_distance=story_distance,
        sentence_distance=sentence_distance,
    )


_COLORS = ["red", "blue", "green", "amber", "violet", "teal", "coral", "olive"]
_THINGS = ["ball", "kite", "drum", "lamp", "boat", "ring", "vase", "horn"]


def synthetic_joint_examples(n, seed=0):
    """Memorizable joint-format examples: the story names a color and the
    correct assertion object repeats that color."""
    rng = random.Random(seed)
    out = []
    for i in range(n):
        color = _COLORS[i % len(_COLORS)]
        thing = _THINGS[rng.randrange(len(_THINGS))]
        story = f"sam saw the {color} {thing} . it was {color} ."
        sent = f"it was {color} ."
        out.append(TrainingExample(
            source_text=f"{story} <|target|> {sent}",
            target_text=(
                f"<specific> <subject> {thing} <relation> is a "
                f"<object> {color} thing"
            ),
            format="joint",
            hinted=False,
            assertion_id=f"synthetic:{i}",
            story_id=f"story:{i}",
            sentence_index=2,
            source="conceptnet",
        ))
    return out


@pytest.fixture
def two_stories():
    return [
        Story("st1", ("The dog barked.", "It was an animal.", "Everyone laughed.")),
        Story("st2", ("The red team played hard.", "They scored a goal.",
                      "They won the game.")),
    ]
