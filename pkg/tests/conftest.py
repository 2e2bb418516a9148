"""Shared oracle helpers: expected vectors built by independent index arithmetic."""

from __future__ import annotations

import numpy as np
import pytest


def basis_index(term: str, spin_bit: int | None = None) -> int:
    """Index of a basis ket, photon 1 at the MSB, optional spin at the LSB."""
    idx = 0
    for ch in term:
        idx = (idx << 1) | (1 if ch == "L" else 0)
    if spin_bit is not None:
        idx = (idx << 1) | spin_bit
    return idx


def expected_vector(n_photons: int, terms: dict, spin_slots: bool = False) -> np.ndarray:
    """Dense amplitude vector from {term: amplitude} with independent indexing.

    Keys are either polarization strings (photons only) or ``(term, spin_bit)``
    pairs when ``spin_slots`` is set.
    """
    dim = (1 << n_photons) * (2 if spin_slots else 1)
    vec = np.zeros(dim, dtype=np.complex128)
    for key, amp in terms.items():
        if spin_slots:
            term, sbit = key
            vec[basis_index(term, sbit)] += amp
        else:
            vec[basis_index(key)] += amp
    return vec


def uniform_vector(n_photons: int, terms: list[str]) -> np.ndarray:
    amp = 1.0 / np.sqrt(len(terms))
    return expected_vector(n_photons, {t: amp for t in terms})


@pytest.fixture
def rng():
    return np.random.default_rng(np.random.SeedSequence(20260810))
