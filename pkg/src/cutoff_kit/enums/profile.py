from enum import StrEnum


class ProfileKind(StrEnum):
    exact = 'exact'
    mc_upper = 'mc_upper'
    mc_lower = 'mc_lower'


class TimeDomain(StrEnum):
    discrete = 'discrete'
    continuous = 'continuous'
