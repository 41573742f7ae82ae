"""Named verification runs: each pairs a simulated chain with the bound that should hold for it.

Kept out of the package ``__init__`` since the chain presets import the model packages.
"""
from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import pandas as pd

from cutoff_kit.concentration.bounds import (
    ContinuousChainBoundParams,
    ContractiveParams,
    MartingaleBoundParams,
    continuous_chain_tail_bound,
    contractive_bound,
    mg_tail_bound,
)
from cutoff_kit.concentration.verify import empirical_tail_verify
from cutoff_kit.config import DEFAULT_CHUNK_SIZE
from cutoff_kit.enums import ContractiveMode
from cutoff_kit.markov_core import SeedSpec


__all__ = ['VerifyPreset', 'VERIFY_PRESETS', 'run_preset']


PresetRunner = Callable[..., pd.DataFrame]


@dataclass(frozen=True)
class VerifyPreset:
    name: str
    description: str
    runner: PresetRunner
    default_trials: int = 10_000

    def run(
        self,
        trials: int | None = None,
        seed: SeedSpec | int = 0,
        *,
        threads: int = 1,
        chunk_size: int = DEFAULT_CHUNK_SIZE,
        progress: bool = False,
    ) -> pd.DataFrame:
        return self.runner(
            self.default_trials if trials is None else trials, seed,
            threads=threads, chunk_size=chunk_size, progress=progress,
        )


def _bl(bound: str) -> PresetRunner:
    def run(trials: int, seed, **kwargs) -> pd.DataFrame:
        from cutoff_kit.bernoulli_laplace import BLParams, bl_concentration_verify
        return bl_concentration_verify(
            BLParams(100), j0=100, r_grid=(50, 200, 575), c_grid=(1.0, 1.5, 2.0),
            trials=trials, seed=seed, bound=bound, **kwargs,
        )
    return run


def _mg_lemma(trials: int, seed, **kwargs) -> pd.DataFrame:
    # sum of k fair +-1 steps: conditional variances add up to k, increments are 1
    k = 100
    c_values = np.array([1.0, 1.5, 2.0, 2.5, 3.0])
    params = MartingaleBoundParams(delta=k, gamma=1.0)
    report = empirical_tail_verify(
        lambda size, rng: 2.0 * rng.binomial(k, 0.5, size=size) - k,
        center=0.0,
        m_grid=c_values * math.sqrt(k),
        bound_fn=lambda m: mg_tail_bound(m, params),
        n_samples=trials,
        seed=seed,
        **kwargs,
    )
    return report.frame


def _walk_continuous(trials: int, seed, **kwargs) -> pd.DataFrame:
    # +-1 walk at rate r each way, observed at time t: difference of two Poisson(rt) counts
    r, t = 1.0, 50.0
    params = ContinuousChainBoundParams(beta_hat=1.0, a_hat_t=2 * r * t, t=t)
    report = empirical_tail_verify(
        lambda size, rng: (rng.poisson(r * t, size=size) - rng.poisson(r * t, size=size)).astype(float),
        center=0.0,
        m_grid=(10.0, 15.0, 20.0, 25.0, 30.0),
        bound_fn=lambda m: continuous_chain_tail_bound(m, params),
        n_samples=trials,
        seed=seed,
        **kwargs,
    )
    return report.frame


def _epi_contractive(trials: int, seed, **kwargs) -> pd.DataFrame:
    '''x1 at t = 1 from (150, 150), symmetric two-host chain with n = 100.

    f = x1 is 1-Lipschitz in the theta-norm, one jump moves at most 1 v theta,
    and q is the exit-rate bound on D_n(H) for the default H at zeta = 1/2.
    '''
    from cutoff_kit.markov_core import simulate_ctmc_ensemble
    from cutoff_kit.two_host import EpiJumpModel, EpiParams, default_H, max_exit_rate, mean_trajectory, spectral_decompose

    p = EpiParams.symmetric(n=100)
    s = spectral_decompose(p)
    x0, t = (150, 150), 1.0
    params = ContractiveParams(
        L=1.0, D=max(1.0, s.theta), rho=s.rho, q=max_exit_rate(p, default_H(p, 0.5, s), s), horizon=t,
    )
    model = EpiJumpModel(p)

    def sample(size: int, rng: np.random.Generator) -> np.ndarray:
        # one chunk per call; the sub-seed is drawn from the chunk's own stream
        sub_seed = int(rng.integers(0, 2**63))
        result = simulate_ctmc_ensemble(model, x0, [t], size, sub_seed, chunk_size=max(size, 1))
        return result.at(0)[:, 0].astype(float)

    report = empirical_tail_verify(
        sample,
        center=float(mean_trajectory(p, x0, t, s)[0]),
        m_grid=np.array([5.0, 10.0, 15.0, 20.0]) * math.sqrt(p.n),
        bound_fn=lambda m: contractive_bound(m, params, ContractiveMode.continuous_a),
        n_samples=trials,
        seed=seed,
        **kwargs,
    )
    return report.frame


VERIFY_PRESETS: dict[str, VerifyPreset] = {
    preset.name: preset
    for preset in (
        VerifyPreset('bl-discrete', 'Bernoulli-Laplace n=100 from j=100 against the discrete chain bound', _bl('discrete')),
        VerifyPreset('bl-contractive', 'Bernoulli-Laplace n=100 from j=100 against the contractive bound', _bl('contractive')),
        VerifyPreset('mg-lemma', 'sum of 100 fair +-1 steps against the martingale bound', _mg_lemma),
        VerifyPreset('walk-continuous', 'continuous-time +-1 walk at t=50 against the continuous chain bound', _walk_continuous),
        VerifyPreset('epi-contractive', 'two-host x1 at t=1 against the continuous contractive bound', _epi_contractive,
                     default_trials=2_000),
    )
}


def run_preset(name: str, trials: int | None = None, seed: SeedSpec | int = 0, **kwargs) -> pd.DataFrame:
    try:
        preset = VERIFY_PRESETS[name]
    except KeyError:
        raise ValueError(f'unknown preset {name!r}, choose from {sorted(VERIFY_PRESETS)}') from None
    return preset.run(trials, seed, **kwargs)
