"""Counter-based random streams and the block-parallel trial runner.

Trials are cut into fixed blocks of :data:`BLOCK_TRIALS`. Block ``b`` of
point ``p`` under master seed ``s`` draws from a Philox generator keyed by
``s`` whose counter starts at ``(p, b, 0, 0)``; a trial's draws are thus a
fixed function of ``(s, p, trial index, draw index)`` and never depend on how
blocks are spread over workers.
"""

from __future__ import annotations

import secrets
from concurrent.futures import ProcessPoolExecutor

import numpy as np

BLOCK_TRIALS = 1024
SEED_MASK = (1 << 64) - 1

# Stream families beyond the per-point trial streams.
BOOTSTRAP_OFFSET = 1 << 32
PREPASS_OFFSET = 1 << 33


def fresh_seed() -> int:
    return secrets.randbits(64)


def block_generator(seed: int, point: int, block: int) -> np.random.Generator:
    if not 0 <= point < 1 << 64 or not 0 <= block < 1 << 64:
        raise ValueError("point and block indices must fit in 64 bits")
    counter = (point << 192) | (block << 128)
    return np.random.Generator(np.random.Philox(key=int(seed) & SEED_MASK, counter=counter))


def _run_block(job):
    fn, args, seed, point, block, count = job
    return fn(args, block_generator(seed, point, block), count)


def run_trials(fn, args, *, seed: int, point: int, trials: int, workers: int = 1) -> np.ndarray:
    """Evaluate ``fn(args, generator, count)`` over all blocks and stack in trial order.

    ``fn`` must be a module-level function returning an array whose first
    axis has length ``count``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    jobs = []
    for block, start in enumerate(range(0, trials, BLOCK_TRIALS)):
        jobs.append((fn, args, seed, point, block, min(BLOCK_TRIALS, trials - start)))
    if workers <= 1 or len(jobs) == 1:
        parts = [_run_block(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_block, jobs))
    return np.concatenate([np.asarray(p) for p in parts], axis=0)
