from enum import StrEnum


class OutputFormat(StrEnum):
    csv = 'csv'
    json = 'json'


class NotebookType(StrEnum):
    """Notebook front-ends that need tqdm instead of a rich live display."""
    jupyter = 'jupyter'
    marimo = 'marimo'
