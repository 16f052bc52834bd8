import os
from pathlib import Path

import numpy as np
import pytest

import aecs

DATA_ROOT = os.environ.get("AECS_DATA_ROOT")


def ucr_available(*names) -> bool:
    """True when every named UCR dataset pair can be found under the data root."""
    if not DATA_ROOT:
        return False
    try:
        for name in names:
            aecs.ucr_paths(DATA_ROOT, name)
        return True
    except aecs.DataError:
        return False


def load_ucr_merged(name: str) -> aecs.TimeSeriesDataset:
    train_path, test_path = aecs.ucr_paths(DATA_ROOT, name)
    ds = aecs.load_dataset(train_path, fmt="ucr_tsv")
    if test_path is not None:
        ds = aecs.merge(ds, aecs.load_dataset(test_path, fmt="ucr_tsv"))
    from dataclasses import replace

    return aecs.z_normalize(replace(ds, name=name))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_sines(n_series=8, n_steps=16, seed=0) -> aecs.TimeSeriesDataset:
    """Small synthetic dataset: sinusoids with varied frequency and phase."""
    gen = np.random.default_rng(seed)
    t = np.arange(n_steps)
    rows = []
    for i in range(n_series):
        freq = 0.5 + 0.5 * (i % 4)
        phase = gen.uniform(0, 2 * np.pi)
        rows.append(np.sin(2 * np.pi * freq * t / n_steps + phase))
    values = np.asarray(rows)[:, :, None]
    labels = np.arange(n_series) % 2
    labels = (np.unique(labels, return_inverse=True)[1]).astype(np.int64)
    return aecs.TimeSeriesDataset(
        values=values,
        lengths=np.full(n_series, n_steps, dtype=np.int64),
        labels=labels,
        name="sines",
    )


def make_two_blob_dataset(n_per=12, n_steps=20, seed=3) -> aecs.TimeSeriesDataset:
    """Two well-separated series shapes (sine vs ramp) with noise."""
    gen = np.random.default_rng(seed)
    t = np.linspace(0, 1, n_steps)
    rows = []
    for _ in range(n_per):
        rows.append(np.sin(2 * np.pi * 2 * t) + 0.05 * gen.normal(size=n_steps))
    for _ in range(n_per):
        rows.append(2 * t - 1 + 0.05 * gen.normal(size=n_steps))
    values = np.asarray(rows)[:, :, None]
    labels = np.array([0] * n_per + [1] * n_per, dtype=np.int64)
    return aecs.TimeSeriesDataset(
        values=values,
        lengths=np.full(2 * n_per, n_steps, dtype=np.int64),
        labels=labels,
        name="blobs",
    )
