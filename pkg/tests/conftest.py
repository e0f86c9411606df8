"""Shared builders for seeded random test datasets.

The corpus datasets are smooth sinusoid mixtures so both metrics behave
well: ranges never degenerate, CRP curves stay smooth under grid
refinement, and the covariance is full rank. Repetitions intentionally
differ in duration, sample count, and small phase/noise perturbations.
"""

import numpy as np
import pytest

from coordmetrics import Dataset, Repetition


def make_smooth_dataset(seed, n_joints=2, n_reps=5, name=None, joints=None):
    """Seeded dataset of smooth sinusoidal joint trajectories.

    Each joint is one dominant sinusoid plus a 0.3x second harmonic, which
    keeps every phase portrait a loop around the origin (phase unwrapping
    stays stable under grid refinement). Repetitions differ in duration,
    sample count, phase, and amplitude.
    """
    rng = np.random.default_rng(seed)
    amp = rng.uniform(0.6, 2.0, size=n_joints)
    freq = rng.uniform(0.8, 1.3, size=n_joints)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=(n_joints, 2))

    reps = []
    for _ in range(n_reps):
        duration = rng.uniform(0.8, 1.2)
        samples = int(rng.integers(250, 401))
        t = np.linspace(0.0, duration, samples)
        s = t / duration
        phase_jitter = rng.normal(0.0, 0.05, size=n_joints)
        scale = rng.uniform(0.9, 1.1, size=n_joints)
        angles = np.column_stack(
            [
                scale[c] * amp[c] * (
                    np.sin(2 * np.pi * freq[c] * s + phase[c, 0] + phase_jitter[c])
                    + 0.3 * np.sin(4 * np.pi * s + phase[c, 1])
                )
                for c in range(n_joints)
            ]
        )
        reps.append(Repetition(time=t, angles=angles))

    return Dataset(
        name=name or f"random_{seed}",
        joints=joints or tuple(f"j{c + 1}" for c in range(n_joints)),
        reps=tuple(reps),
    )


def make_corpus(n_entries=20, base_seed=100):
    """(A, B, C) dataset triples sharing joints, sizes cycling n=2..4, k=4..10."""
    triples = []
    for idx in range(n_entries):
        n = 2 + idx % 3
        k = 4 + idx % 7
        joints = tuple(f"j{c + 1}" for c in range(n))
        seed = base_seed + 10 * idx
        triples.append(
            tuple(
                make_smooth_dataset(seed + part, n_joints=n, n_reps=k, joints=joints)
                for part in range(3)
            )
        )
    return triples


@pytest.fixture(scope="session")
def corpus():
    return make_corpus()
