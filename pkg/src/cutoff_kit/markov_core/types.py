from __future__ import annotations
from typing import TYPE_CHECKING, Protocol, TypeAlias, runtime_checkable
if TYPE_CHECKING:
    import pandas as pd

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from cutoff_kit.errors import DimensionMismatchError


__all__ = [
    'NORMALIZATION_TOL',
    'ProbVector',
    'DenseKernel',
    'JumpPath',
    'SeedSpec',
    'State',
    'RateFunction',
    'JumpModel',
    'as_rate_function',
]


NORMALIZATION_TOL = 1e-12

State: TypeAlias = tuple[int, ...]
# state -> finite list of (jump vector, rate); every listed rate is > 0
RateFunction: TypeAlias = Callable[[State], Sequence[tuple[State, float]]]


def _readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProbVector:
    """Probability distribution over the states 0..size-1."""
    probs: np.ndarray

    def __post_init__(self):
        probs = _readonly(self.probs).ravel()
        if probs.size == 0:
            raise ValueError('ProbVector needs at least one state')
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise ValueError('ProbVector entries must be finite and non-negative')
        total = float(probs.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f'ProbVector entries sum to {total!r}, expected 1 within {NORMALIZATION_TOL}')
        object.__setattr__(self, 'probs', probs)

    @classmethod
    def point_mass(cls, size: int, index: int) -> ProbVector:
        if not 0 <= index < size:
            raise ValueError(f'index {index} outside the state space 0..{size - 1}')
        probs = np.zeros(size)
        probs[index] = 1.0
        return cls(probs)

    @classmethod
    def normalized(cls, weights) -> ProbVector:
        weights = np.asarray(weights, dtype=float)
        return cls(weights / weights.sum())

    @property
    def size(self) -> int:
        return self.probs.size

    def __len__(self) -> int:
        return self.size

    def mean(self, values=None) -> float:
        values = np.arange(self.size) if values is None else np.asarray(values, dtype=float)
        return float(self.probs @ values)

    def variance(self, values=None) -> float:
        values = np.arange(self.size) if values is None else np.asarray(values, dtype=float)
        mean = self.probs @ values
        return float(self.probs @ (values - mean) ** 2)

    def to_frame(self, values=None) -> pd.DataFrame:
        import pandas as pd
        index = np.arange(self.size) if values is None else np.asarray(values)
        return pd.DataFrame({'index': index, 'value': self.probs})


@dataclass(frozen=True, eq=False)
class DenseKernel:
    """Row-stochastic one-step transition matrix."""
    rows: np.ndarray

    def __post_init__(self):
        rows = _readonly(self.rows)
        if rows.ndim != 2 or rows.shape[0] != rows.shape[1] or rows.shape[0] == 0:
            raise DimensionMismatchError(f'kernel must be a non-empty square matrix, got shape {rows.shape}')
        if np.any(rows < 0) or np.any(rows > 1):
            raise ValueError('kernel entries must lie in [0, 1]')
        row_sums = rows.sum(axis=1)
        worst = int(np.argmax(np.abs(row_sums - 1.0)))
        if abs(row_sums[worst] - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f'kernel row {worst} sums to {row_sums[worst]!r}')
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def identity(cls, size: int) -> DenseKernel:
        return cls(np.eye(size))

    @property
    def size(self) -> int:
        return self.rows.shape[0]

    def neighbours(self, x: int) -> np.ndarray:
        """States reachable from x in one step, x itself excluded."""
        targets = np.flatnonzero(self.rows[x] > 0)
        return targets[targets != x]

    def lazy(self) -> DenseKernel:
        return DenseKernel(0.5 * (np.eye(self.size) + self.rows))


@dataclass(frozen=True, eq=False)
class JumpPath:
    """Piecewise-constant trajectory: states[i] holds on [times[i-1], times[i])."""
    times: np.ndarray
    states: np.ndarray
    t_end: float

    def __post_init__(self):
        times = _readonly(self.times).ravel()
        states = np.array(self.states, dtype=np.int64)
        if states.ndim == 1:
            states = states[:, None]
        states.setflags(write=False)
        if states.shape[0] != times.size + 1:
            raise DimensionMismatchError(
                f'a path with {times.size} jumps needs {times.size + 1} states, got {states.shape[0]}'
            )
        if times.size:
            if np.any(np.diff(times) <= 0):
                raise ValueError('jump times must be strictly increasing')
            if times[0] < 0 or times[-1] > self.t_end:
                raise ValueError(f'jump times must lie in [0, {self.t_end}]')
            if np.any(np.all(states[1:] == states[:-1], axis=1)):
                raise ValueError('recorded jumps must change the state')
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'states', states)

    @property
    def n_jumps(self) -> int:
        return self.times.size

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def state_at(self, t: float) -> State:
        if not 0 <= t <= self.t_end:
            raise ValueError(f'time {t} outside [0, {self.t_end}]')
        i = int(np.searchsorted(self.times, t, side='right'))
        return tuple(int(v) for v in self.states[i])

    def to_frame(self) -> pd.DataFrame:
        import pandas as pd
        frame = pd.DataFrame(self.states, columns=[f'x{i + 1}' for i in range(self.dim)])
        frame.insert(0, 'time', np.concatenate([[0.0], self.times]))
        return frame


_SEED_BOUND = 2**64


@dataclass(frozen=True)
class SeedSpec:
    '''Reproducible random stream.

    The generator of (root_seed, stream_index) is
    PCG64(SeedSequence(root_seed, spawn_key=(stream_index, *path))), where path
    is empty for a user-built spec. Derived streams extend the path:
    chunk(c) appends (0, c) and child(i) appends (1, i). Different paths give
    different spawn keys, so no two derived streams share state.
    '''
    root_seed: int
    stream_index: int = 0
    path: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if isinstance(self.root_seed, bool) or not isinstance(self.root_seed, (int, np.integer)):
            raise TypeError(f'root_seed must be an integer, got {type(self.root_seed).__name__}')
        if not 0 <= self.root_seed < _SEED_BOUND:
            raise ValueError(f'root_seed must be a 64-bit unsigned integer, got {self.root_seed}')
        if self.stream_index < 0 or any(k < 0 for k in self.path):
            raise ValueError('stream indices must be non-negative')
        object.__setattr__(self, 'root_seed', int(self.root_seed))

    @classmethod
    def coerce(cls, seed: SeedSpec | int) -> SeedSpec:
        return seed if isinstance(seed, SeedSpec) else cls(int(seed))

    @property
    def spawn_key(self) -> tuple[int, ...]:
        return (self.stream_index, *self.path)

    def chunk(self, index: int) -> SeedSpec:
        return SeedSpec(self.root_seed, self.stream_index, (*self.path, 0, index))

    def child(self, index: int) -> SeedSpec:
        return SeedSpec(self.root_seed, self.stream_index, (*self.path, 1, index))

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.root_seed, spawn_key=self.spawn_key)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence()))


@runtime_checkable
class JumpModel(Protocol):
    """Continuous-time chain on Z^d with a fixed jump table.

    `jumps` has shape (K, d); `rates(states)` maps an (N, d) integer array to
    an (N, K) array of non-negative rates, one column per jump.
    """
    jumps: np.ndarray

    def rates(self, states: np.ndarray) -> np.ndarray: ...


def as_rate_function(model: JumpModel) -> RateFunction:
    """Single-state view of a JumpModel; zero-rate jumps are omitted."""
    jumps = [tuple(int(v) for v in jump) for jump in np.asarray(model.jumps)]

    def rate_function(state: State) -> list[tuple[State, float]]:
        rates = model.rates(np.asarray([state], dtype=np.int64))[0]
        return [(jump, float(rate)) for jump, rate in zip(jumps, rates) if rate > 0]

    return rate_function
