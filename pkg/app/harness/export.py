from pathlib import Path
from typing import Dict, Optional

import pandas as pd

from .. import __version__
from ..utils.io import write_json, write_table
from .config import ExperimentConfig, config_hash


def stamp(frame: pd.DataFrame, digest: str, version: str) -> pd.DataFrame:
    """Append config-hash and version columns to every record."""
    frame = frame.copy()
    frame["config_hash"] = digest
    frame["version"] = version
    return frame


def write_outputs(config: ExperimentConfig, tag: str, table: pd.DataFrame, summary: Dict,
                  extra_tables: Optional[Dict[str, pd.DataFrame]] = None) -> Dict[str, Path]:
    """Write ``<tag>.csv``, ``<tag>.json`` and ``<tag>_<name>.csv`` extras into ``out_dir``.

    Outputs depend only on the config (never on timing or worker count),
    so reruns are byte-identical.
    """
    out_dir = Path(config.out_dir)
    digest = config_hash(config)
    paths = {"table": write_table(stamp(table, digest, __version__), out_dir / f"{tag}.csv")}
    for name, frame in (extra_tables or {}).items():
        paths[name] = write_table(stamp(frame, digest, __version__), out_dir / f"{tag}_{name}.csv")
    payload = {"experiment": tag, "config_hash": digest, "version": __version__,
               "summary": summary, "config": config.to_dict()}
    paths["summary"] = write_json(payload, out_dir / f"{tag}.json")
    return paths
