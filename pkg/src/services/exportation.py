import logging

import pandas as pd

from services import path_utils as pus

logger = logging.getLogger(__name__)


class TableFormatter:
    """Builds the text and spreadsheet tables of a run, one DataFrame at a time."""

    def __init__(self):
        self.tables: list[pd.DataFrame] = []
        self.table = pd.DataFrame()

    def initialize_table_list(self):
        """
        Initializes the list of tables to an empty list.
        """
        self.tables = []
        return self

    def set_grid(self, rows: list[dict], n_columns: int):
        """
        Sets the table to a spectral sequence page: one row per q, highest
        first, one column per p, blank where the entry is zero.
        Args:
            rows (list[dict]): Entries as ``{"p": p, "q": q, "dim": dim}``.
            n_columns (int): Number of columns of the page.
        """
        values = {(r["p"], r["q"]): r["dim"] for r in rows}
        qs = sorted({q for _, q in values}, reverse=True)
        data = {
            p: [values.get((p, q), "") for q in qs] for p in range(1, n_columns + 1)
        }
        self.table = pd.DataFrame(data, index=pd.Index(qs, name="q"))
        self.table.columns = pd.Index(range(1, n_columns + 1), name="p")
        return self

    def set_rows(self, rows: list[dict], columns: list[str] | None = None):
        """
        Sets the table from a list of records.
        Args:
            rows (list[dict]): One dictionary per row.
            columns (list[str] | None): Column order, all keys when omitted.
        """
        self.table = pd.DataFrame(rows, columns=columns)
        return self

    def set_mapping(self, mapping: dict, key: str, value: str):
        """Sets a two-column table from a mapping."""
        self.table = pd.DataFrame({key: list(mapping), value: list(mapping.values())})
        return self

    def add_table_title(self, column_name: str, title: str):
        """
        Adds a new column with a specified title
        to the beginning of the current table DataFrame.
        Args:
            column_name (str): The name of the new column to be added.
            title (str): The title to be set in the first row of the new column.
        """
        table = self.table.reset_index() if self.table.index.name else self.table.copy()
        table.columns = [str(c) for c in table.columns]
        table.insert(0, column_name, "")
        if len(table):
            table.iloc[0, 0] = title
        self.table = table
        return self

    def append_table(self):
        """
        Appends the current table DataFrame to the list of tables.
        """
        self.tables.append(self.table)
        return self

    def append_empty_row(self):
        """
        Appends an empty row with the same columns as the current table
        to the list of tables.
        """
        empty_row = pd.DataFrame(
            [[""] * len(self.table.columns)], columns=self.table.columns
        )
        self.tables.append(empty_row)
        return self

    def to_text(self) -> str:
        """Renders the collected tables, spacer rows excluded, separated by blank lines."""
        blocks = []
        for table in self.tables:
            if len(table) == 1 and (table.iloc[0] == "").all():
                continue
            show_index = table.index.name is not None
            blocks.append(table.to_string(index=show_index))
        return "\n\n".join(blocks)


class ResultExporter:
    """Writes groups of tables as the sheets of one workbook."""

    def __init__(self, overwrite: bool = False):
        self.overwrite = overwrite

    def export_results(self, path: str, sheets: dict[str, list[pd.DataFrame]]) -> str:
        """
        Writes every group of tables to its own sheet.
        Args:
            path (str): Requested workbook path, ``.xlsx`` added when missing.
            sheets (dict[str, list[pd.DataFrame]]): Sheet name to tables.
        Returns:
            str: The path actually written, made unique unless overwriting.
        """
        stem, extension = pus.split_extension(path, "xlsx")
        filename = pus.ensure_unique_filename(stem, extension, self.overwrite)
        pus.ensure_directory(f"{filename}.{extension}")
        with pd.ExcelWriter(f"{filename}.{extension}") as writer:
            for sheet_name, tables in sheets.items():
                self.write_to_excel(writer, sheet_name, tables)
        logger.info("wrote %s", f"{filename}.{extension}")
        return f"{filename}.{extension}"

    def write_to_excel(self, writer: pd.ExcelWriter, sheet_name: str, tables: list[pd.DataFrame]):
        if not tables:
            pd.DataFrame().to_excel(writer, sheet_name=sheet_name[:31])
            return
        flat = [t.reset_index() if t.index.name else t.copy() for t in tables]
        for t in flat:
            t.columns = [str(c) for c in t.columns]
        final_df = pd.concat(flat, ignore_index=True)
        final_df.to_excel(writer, sheet_name=sheet_name[:31], index=False)
