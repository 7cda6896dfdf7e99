"""Lattice reports: JSON serialization, DOT export and Hasse-diagram figures."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .cd_engine import CDResult
from .class2 import CentralSubgroup
from .lattice import FiniteLattice, from_subgroup_family


class ReportError(ValueError):
    pass


def render_int(n: int, p: int | None) -> str | int:
    """``p^e`` for powers of p, the plain integer otherwise."""
    if p is None or n < 1:
        return n
    e, m = 0, n
    while m % p == 0:
        m //= p
        e += 1
    return f"{p}^{e}" if m == 1 else n


def parse_int(value: str | int) -> int:
    if isinstance(value, int):
        return value
    base, _, exp = str(value).partition("^")
    return int(base) ** int(exp) if exp else int(base)


def cd_report(cd: CDResult) -> dict:
    """The JSON report of a Chermak-Delgado computation."""
    p = cd.prime
    g = cd.group
    lat = from_subgroup_family(cd.subgroups, check_closed=False)
    members = []
    for i, m in enumerate(cd.members):
        h = m.subgroup
        entry: dict[str, Any] = {"id": i, "order": render_int(h.order, p), "measure": render_int(m.measure, p)}
        if isinstance(h, CentralSubgroup):
            entry["basis"] = [list(v) for v in h.w.basis]
        else:
            entry["generators"] = [g.labels[x] for x in h.generators()]
            entry["elements"] = h.elements()
        members.append(entry)
    return {
        "group": g.name,
        "engine": cd.engine,
        "prime": p,
        "order": render_int(g.order, p),
        "max_measure": render_int(cd.max_measure, p),
        "members": members,
        "covers": [list(c) for c in lat.covers()],
        "duality": [list(d) for d in cd.duality],
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(report))


def load_report(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ReportError(f"cannot read report {path}: {exc}") from None
    validate_report(data)
    return data


def validate_report(data: Any) -> None:
    if not isinstance(data, dict):
        raise ReportError("report must be a JSON object")
    for key in ("group", "max_measure", "members", "covers"):
        if key not in data:
            raise ReportError(f"report is missing {key!r}")
    n = len(data["members"])
    for i, m in enumerate(data["members"]):
        if not isinstance(m, dict) or m.get("id") != i or "order" not in m:
            raise ReportError(f"member {i} is malformed")
    for c in data["covers"]:
        if not (isinstance(c, list) and len(c) == 2 and all(isinstance(x, int) and 0 <= x < n for x in c)):
            raise ReportError(f"bad cover entry {c!r}")


def lattice_from_report(data: dict) -> FiniteLattice:
    """Rebuild the lattice from the cover relation of a report."""
    validate_report(data)
    n = len(data["members"])
    leq = np.eye(n, dtype=bool)
    for lo, hi in data["covers"]:
        leq[lo, hi] = True
    # transitive closure
    for k in range(n):
        leq |= leq[:, k:k + 1] & leq[k:k + 1, :]
    return FiniteLattice(leq, data["members"])


def to_dot(data: dict) -> str:
    """Hasse diagram as a DOT digraph, edges from smaller to larger member."""
    validate_report(data)
    lines = ["digraph CD {", "  rankdir=BT;", "  node [shape=box];"]
    for m in data["members"]:
        lines.append(f'  n{m["id"]} [label="order={m["order"]}, m={m.get("measure", data["max_measure"])}"];')
    for lo, hi in sorted(map(tuple, data["covers"])):
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_positions(lat: FiniteLattice) -> dict[int, tuple[float, float]]:
    by_rank: dict[int, list[int]] = {}
    for x in range(lat.size):
        by_rank.setdefault(lat.rank[x], []).append(x)
    pos = {}
    for r, xs in by_rank.items():
        k = len(xs)
        for i, x in enumerate(xs):
            pos[x] = ((i + 1) / (k + 1), float(r))
    return pos


def plot_hasse(data: dict, path: str | Path, title: str | None = None) -> None:
    """Render the report's Hasse diagram to an image file (format from the suffix)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    lat = lattice_from_report(data)
    pos = hasse_positions(lat)
    height = max(lat.height, 1)
    widest = max(sum(1 for x in range(lat.size) if lat.rank[x] == r) for r in range(height + 1))
    fig, ax = plt.subplots(figsize=(min(4 + 0.35 * widest, 24), 1.6 * height + 2))
    for lo, hi in lat.covers():
        (x0, y0), (x1, y1) = pos[lo], pos[hi]
        ax.plot([x0, x1], [y0, y1], color="0.55", lw=0.8, zorder=1)
    xs = [pos[i][0] for i in range(lat.size)]
    ys = [pos[i][1] for i in range(lat.size)]
    ax.scatter(xs, ys, s=40, color="tab:blue", zorder=2)
    if lat.size <= 40:
        for i, m in enumerate(data["members"]):
            ax.annotate(str(m["order"]), pos[i], textcoords="offset points", xytext=(6, 4), fontsize=8)
    ax.set_yticks(range(height + 1))
    ax.set_ylabel("rank")
    ax.set_xticks([])
    for side in ("top", "right", "bottom"):
        ax.spines[side].set_visible(False)
    ax.set_title(title or f"CD({data['group']}): {lat.size} members, m* = {data['max_measure']}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
