from cutoff_kit.enums.profile import ProfileKind, TimeDomain
from cutoff_kit.enums.bounds import BoundName, ContractiveMode
from cutoff_kit.enums.output import NotebookType, OutputFormat


__all__ = [
    'NotebookType',
    'ProfileKind',
    'TimeDomain',
    'BoundName',
    'ContractiveMode',
    'OutputFormat',
]
