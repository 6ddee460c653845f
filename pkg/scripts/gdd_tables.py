"""Write every GDD infeasibility table as TSV."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from _config import dump, parse_config

from maxdet.feasibility import GDD_TABLES, gdd_table_tsv


@dataclass
class TablesConfig:
    out_dir: str = "gdd_tables"


def run(cfg: TablesConfig) -> dict:
    d = Path(cfg.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    rows = {}
    for name in GDD_TABLES:
        text = gdd_table_tsv(name)
        (d / f"{name}.tsv").write_text(text)
        rows[name] = text.count("\n") - 1
    return rows


if __name__ == "__main__":
    cfg = parse_config(TablesConfig)
    print(dump(cfg, run(cfg)))
