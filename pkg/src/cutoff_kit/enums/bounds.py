from enum import StrEnum


class BoundName(StrEnum):
    mg = 'mg'
    discrete = 'discrete'
    continuous = 'continuous'
    contractive = 'contractive'
    hitting = 'hitting'


class ContractiveMode(StrEnum):
    discrete_a = 'discrete_a'
    discrete_b = 'discrete_b'
    continuous_a = 'continuous_a'
    continuous_b = 'continuous_b'

    @property
    def is_continuous(self) -> bool:
        return self.startswith('continuous')

    @property
    def has_excursion_term(self) -> bool:
        return self.endswith('_b')
