"""Seeded random state families.

Every draw is tied to a stream ``(master_seed, stream_index)`` so that a
batch can be split over any number of workers and still reproduce the
same states.  Streams are backed by numpy's counter-based Philox bit
generator keyed through :class:`numpy.random.SeedSequence`; no generator
state is shared between streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .states import CoherentAngles, DensityMatrix, PureSpin1

_SEED_MASK = (1 << 64) - 1

#: Purpose labels keep streams used for different jobs apart.
PURPOSE_STATES = 0
PURPOSE_ATOMS = 1
PURPOSE_REFINE = 2


@dataclass(frozen=True)
class RngStream:
    """Independent random stream identified by ``(master_seed, stream_index)``.

    ``purpose`` separates streams drawn for different jobs (states, atom
    sets, refinement jitter) under the same seed and index.
    """

    master_seed: int
    stream_index: int = 0
    purpose: int = PURPOSE_STATES

    def __post_init__(self):
        for name in ("master_seed", "stream_index", "purpose"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidInputError(f"{name} must be an integer")
        if self.stream_index < 0 or self.purpose < 0:
            raise InvalidInputError("stream_index and purpose must be non-negative")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence(
            entropy=int(self.master_seed) & _SEED_MASK,
            spawn_key=(int(self.purpose), int(self.stream_index)),
        )
        return np.random.Generator(np.random.Philox(seq))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise InvalidInputError("expected an RngStream or numpy Generator")


def _complex_gaussian(gen: np.random.Generator, shape) -> np.ndarray:
    # real and imaginary parts drawn as one block so the layout is fixed
    z = gen.standard_normal((2,) + tuple(shape))
    return (z[0] + 1j * z[1]) / math.sqrt(2.0)


def random_hs_density(rng) -> DensityMatrix:
    """Hilbert-Schmidt random state ``A A^dagger / tr(A A^dagger)``, ``A`` 3x3 complex Gaussian."""
    a = _complex_gaussian(_as_generator(rng), (3, 3))
    m = a @ a.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure(rng) -> PureSpin1:
    """Unitarily invariant random pure state."""
    v = _complex_gaussian(_as_generator(rng), (3,))
    return PureSpin1.from_vector(v, normalize=True)


def random_coherent(rng) -> CoherentAngles:
    """Coherent-state direction uniform on the sphere."""
    gen = _as_generator(rng)
    u = gen.random(2)
    cos_t = 1.0 - 2.0 * u[0]
    return CoherentAngles(math.acos(cos_t), 2.0 * math.pi * u[1])
