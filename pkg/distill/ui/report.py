import json
from contextlib import contextmanager
from time import perf_counter
from typing import Any, Dict, Iterator, List
from rich.console import Console, RenderableType
from rich.table import Table
from rich.text import Text

console = Console()


def _cell(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(", ", ": "))
    if value is None:
        return "-"

    return str(value)


def _is_checks(rows: List[Any]) -> bool:
    return bool(rows) and all(isinstance(r, dict) and "check" in r and "ok" in r for r in rows)


def checks_table(title: str, rows: List[Dict[str, Any]]) -> Table:
    table = Table(title=title, title_justify="left", show_edge=False)
    table.add_column("check")
    table.add_column("status")
    table.add_column("detail", overflow="fold")
    for row in rows:
        status = Text("pass", style="green") if row["ok"] else Text("fail", style="red")
        table.add_row(row["check"], status, row.get("message", ""))

    return table


def records_table(title: str, rows: List[Dict[str, Any]]) -> Table:
    columns: List[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)

    table = Table(title=title, title_justify="left", show_edge=False)
    for c in columns:
        table.add_column(c, overflow="fold")
    for row in rows:
        table.add_row(*(_cell(row.get(c)) for c in columns))

    return table


def fields_table(title: str, data: Dict[str, Any]) -> Table:
    table = Table(title=title, title_justify="left", show_edge=False, show_header=False)
    table.add_column("field", style="bold")
    table.add_column("value", overflow="fold")
    for key, value in data.items():
        table.add_row(key, _cell(value))

    return table


def render_section(title: str, data: Any) -> RenderableType:
    if isinstance(data, dict):
        return fields_table(title, data)
    if isinstance(data, list) and _is_checks(data):
        return checks_table(title, data)
    if isinstance(data, list) and data and all(isinstance(r, dict) for r in data):
        return records_table(title, data)

    return Text(f"{title}: {_cell(data)}")


class Report:
    """
    Sections of a command's result, in insertion order, plus timings
    """

    def __init__(self, command: str, source: str) -> None:
        self.command = command
        self.source = source
        self.sections: Dict[str, Any] = {}
        self.timings: Dict[str, float] = {}

    def add(self, name: str, data: Any) -> None:
        self.sections[name] = data

    def __contains__(self, name: str) -> bool:
        return name in self.sections

    def __getitem__(self, name: str) -> Any:
        return self.sections[name]

    @contextmanager
    def timed(self, name: str) -> Iterator[None]:
        start = perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round(perf_counter() - start, 6)

    def to_data(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"command": self.command, "source": self.source}
        data.update(self.sections)
        data["timing"] = dict(self.timings)
        return data

    def print(self, out: Console = console) -> None:
        out.rule(f"distill {self.command}: {self.source}")
        for name, data in self.sections.items():
            out.print(render_section(name, data))
            out.print()

        if self.timings:
            spent = ", ".join(f"{k} {v:.3f}s" for k, v in self.timings.items())
            out.print(Text(f"timing: {spent}", style="dim"))
