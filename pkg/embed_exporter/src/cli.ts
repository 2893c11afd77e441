#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { exportEmbeddings, InputError } from "./export.js";
import { ModelError } from "./embedder.js";

yargs(hideBin(process.argv))
  .command(
    "export",
    "Embed a JSONL text corpus and write an EMB1 binary with sidecar and manifest",
    (argv) =>
      argv
        .option("in", { type: "string", demandOption: true, describe: "input texts.jsonl" })
        .option("model", { type: "string", default: "hashed-384", describe: "embedding model name" })
        .option("out", { type: "string", demandOption: true, describe: "output emb.bin path" }),
    (args) => {
      try {
        const manifest = exportEmbeddings(args.in, args.model, args.out);
        console.log(JSON.stringify(manifest));
      } catch (err) {
        if (err instanceof InputError || err instanceof ModelError) {
          console.error(`error: ${err.message}`);
          process.exit(1);
        }
        throw err;
      }
    }
  )
  .demandCommand(1)
  .strict()
  .parse();
