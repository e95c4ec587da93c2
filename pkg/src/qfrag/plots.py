"""Figure rendering for the CLI report paths.

Figures are written straight to file (Agg backend); the output format
follows the file extension, so `--svg foo.svg` produces an SVG.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_SAVE_KWARGS = {"bbox_inches": "tight"}


def _savefig(fig, path: str) -> None:
    if path.endswith(".svg"):
        # drop the creation date so identical inputs give identical files
        fig.savefig(path, metadata={"Date": None}, **_SAVE_KWARGS)
    else:
        fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def save_scan_figure(rows: list[dict], path: str) -> None:
    """Exact vs asymptotic measure curves against the scaling length, log-log."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for n in sorted({row["n"] for row in rows}):
        series = [row for row in rows if row["n"] == n and row["scaling_length"]]
        if not series:
            continue
        sizes = [row["scaling_length"] for row in series]
        ax.plot(sizes, [row["e_less"] for row in series], "o-",
                label=f"n={n} formation-cost family")
        ax.plot(sizes, [row["e_greater"] for row in series], "s-",
                label=f"n={n} negativity family")
        ax.plot(sizes, [row["e_less_asymp"] for row in series], "--", color="gray")
        ax.plot(sizes, [row["e_greater_asymp"] for row in series], ":", color="gray")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("scaling length")
    ax.set_ylabel("entanglement (log base as configured)")
    ax.legend(fontsize=8)
    _savefig(fig, path)


def save_table_figure(tables: list[tuple[int, object]], path: str) -> None:
    """Sector weights and irrep dimensions per label, both on log axes."""
    fig, (ax_w, ax_d) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    for n, table in tables:
        lams = [row.lam for row in table.rows]
        label = f"n={n}, {table.bipartition.l_a}:{table.bipartition.l_b}"
        ax_w.semilogy(lams, [float(row.weight) for row in table.rows], "o-", label=label)
        ax_d.semilogy(lams, [row.irrep_dim for row in table.rows], "s-", label=label)
    ax_w.set_xlabel("irrep label")
    ax_w.set_ylabel("sector weight")
    ax_d.set_xlabel("irrep label")
    ax_d.set_ylabel("irrep dimension")
    ax_w.legend(fontsize=8)
    fig.tight_layout()
    _savefig(fig, path)


def save_truncation_figure(rows: list[dict], path: str) -> None:
    """Full vs truncated negativity-family values against the scaling length."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    keys = sorted({(row["n"], row["eps"]) for row in rows})
    for n, eps in keys:
        series = [
            row for row in rows
            if row["n"] == n and row["eps"] == eps and row["scaling_length"]
        ]
        if not series:
            continue
        sizes = [row["scaling_length"] for row in series]
        ax.plot(sizes, [row["e_greater_full"] for row in series], "s-",
                label=f"n={n} full")
        ax.plot(sizes, [row["e_greater_truncated"] for row in series], "o--",
                label=f"n={n} truncated eps={eps}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("scaling length")
    ax.set_ylabel("negativity-family value")
    ax.legend(fontsize=8)
    _savefig(fig, path)
