"""Central finite-difference gradient checking for module parameters and
inputs. Runs in 64-bit; the checked loss function must be deterministic."""

import torch


def _relative_error(analytic, numeric):
    denom = max(abs(analytic), abs(numeric), 1e-8)
    return abs(analytic - numeric) / denom


def check_parameter_gradients(module, loss_fn, eps=1e-4, samples_per_tensor=5,
                              seed=0):
    """Compare autograd gradients against central differences.

    For every parameter tensor, a handful of coordinates (seeded choice) are
    perturbed. Returns {param_name: max relative error}.
    """
    module.zero_grad()
    loss = loss_fn()
    loss.backward()
    rng = torch.Generator().manual_seed(seed)
    report = {}
    for name, p in module.named_parameters():
        if p.grad is None:
            continue
        flat = p.data.view(-1)
        grad = p.grad.view(-1)
        n = flat.numel()
        k = min(samples_per_tensor, n)
        coords = torch.randperm(n, generator=rng)[:k]
        worst = 0.0
        for c in coords:
            orig = flat[c].item()
            with torch.no_grad():
                flat[c] = orig + eps
                up = loss_fn().item()
                flat[c] = orig - eps
                down = loss_fn().item()
                flat[c] = orig
            numeric = (up - down) / (2 * eps)
            worst = max(worst, _relative_error(grad[c].item(), numeric))
        report[name] = worst
    return report


def check_input_gradient(input_tensor, loss_fn, eps=1e-4, samples=10, seed=0):
    """Finite-difference check of the gradient w.r.t. an input tensor
    (e.g. bridged vectors). Returns the max relative error."""
    if input_tensor.grad is not None:
        input_tensor.grad = None
    loss = loss_fn()
    loss.backward()
    grad = input_tensor.grad.view(-1)
    flat = input_tensor.data.view(-1)
    rng = torch.Generator().manual_seed(seed)
    coords = torch.randperm(flat.numel(), generator=rng)[: min(samples, flat.numel())]
    worst = 0.0
    for c in coords:
        orig = flat[c].item()
        with torch.no_grad():
            flat[c] = orig + eps
            up = loss_fn().item()
            flat[c] = orig - eps
            down = loss_fn().item()
            flat[c] = orig
        numeric = (up - down) / (2 * eps)
        worst = max(worst, _relative_error(grad[c].item(), numeric))
    return worst
