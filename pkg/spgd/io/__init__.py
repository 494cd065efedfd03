from .files import (
    Table,
    dumps,
    read_dataset,
    read_json,
    read_table,
    table_csv,
    write_dataset,
    write_json,
    write_json_async,
    write_predictions,
    write_text_async,
)

__all__ = [
    "Table",
    "dumps",
    "read_dataset",
    "read_json",
    "read_table",
    "table_csv",
    "write_dataset",
    "write_json",
    "write_json_async",
    "write_predictions",
    "write_text_async",
]
