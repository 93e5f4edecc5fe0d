"""Deterministic JSON/CSV writers and the result record envelope."""

import csv
import datetime as dt
import json
import os
from pathlib import Path

import numpy as np

from . import __version__
from .quantities import CODATA2018

__all__ = ["to_jsonable", "dumps_json", "write_json", "write_csv", "result_record", "provenance"]


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        # JSON has no inf/nan
        return v if np.isfinite(v) else None
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(obj), encoding="utf-8")
    return path


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def write_csv(path, header, rows):
    """RFC 4180: CRLF line ends, minimal quoting, UTF-8."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def provenance(const=CODATA2018):
    # wall-clock time would break byte-identical reruns; honour SOURCE_DATE_EPOCH
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    stamp = None
    if epoch and epoch.strip().isdigit():
        stamp = dt.datetime.fromtimestamp(int(epoch), tz=dt.timezone.utc).isoformat()
    return {
        "artifact_version": __version__,
        "constants": const.name,
        "c": const.c,
        "h": const.h,
        "timestamp": stamp,
    }


def result_record(command, config, result, scenario_hash):
    return {
        "command": command,
        "scenario": config.to_dict(),
        "scenario_hash": scenario_hash,
        "result": result,
        "provenance": provenance(),
    }
