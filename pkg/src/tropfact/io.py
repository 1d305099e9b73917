"""JSON, JSON-lines and DOT input/output."""

import json
import os
from datetime import datetime, timezone
from fractions import Fraction

from .exact import format_q

__all__ = [
    "parse_subset", "parse_kn", "parse_collection", "parse_combination",
    "to_jsonable", "dumps", "append_report", "graph_to_dot", "load_json",
    "load_kinematic_point", "thread_cap",
]


def parse_subset(text):
    """``"1,3,5"``, ``"135"`` or a JSON list."""
    text = str(text).strip()
    if text.startswith("["):
        return tuple(sorted(int(x) for x in json.loads(text)))
    if "," in text:
        return tuple(sorted(int(x) for x in text.split(",") if x))
    return tuple(sorted(int(ch) for ch in text))


def parse_kn(text):
    k, n = (int(x) for x in str(text).split(","))
    return k, n


def parse_collection(text):
    return [tuple(sorted(int(x) for x in J)) for J in json.loads(text)]


def parse_combination(text):
    """``"1:135,-1:246"`` or ``"1:1,5,9;-1:2,5,10"`` into (coefficient, subset) pairs."""
    out = []
    sep = ";" if ";" in text else ","
    for part in text.split(sep):
        c, J = part.split(":")
        out.append((Fraction(c), parse_subset(J)))
    return out


def to_jsonable(x):
    if isinstance(x, Fraction):
        return format_q(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): to_jsonable(v)
                for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        seq = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [to_jsonable(v) for v in seq]
    return x


def dumps(x):
    return json.dumps(to_jsonable(x), sort_keys=True)


def append_report(path, record, config):
    """Append one JSON line carrying an ISO timestamp and the full config."""
    line = dict(record)
    line["config"] = config
    line["timestamp"] = datetime.now(timezone.utc).isoformat()
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(dumps(line) + "\n")


def graph_to_dot(G, name="G", label=None):
    """Deterministic DOT text: nodes and edges in sorted order."""
    lines = [f"graph {name} {{"]
    for v in sorted(G.nodes):
        text = label(v) if label else str(v)
        lines.append(f'  n{v} [label="{text}"];')
    for a, b in sorted(tuple(sorted(e)) for e in G.edges):
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_kinematic_point(data, k, n):
    """``{"s": {"1,2,3": "p/q", ...}}`` or a plain list over sorted subsets."""
    from .blades import kn_space
    sp = kn_space(k, n)
    if isinstance(data, dict):
        data = data.get("s", data)
    if isinstance(data, dict):
        vals = [Fraction(0)] * sp.N
        for key, v in data.items():
            vals[sp.index[parse_subset(key)]] = Fraction(str(v))
        return tuple(vals)
    if len(data) != sp.N:
        raise ValueError(f"expected {sp.N} values")
    return tuple(Fraction(str(v)) for v in data)


def thread_cap():
    """Worker cap from TROPFACT_THREADS (at least 1)."""
    try:
        return max(1, int(os.environ.get("TROPFACT_THREADS", "1")))
    except ValueError:
        return 1
