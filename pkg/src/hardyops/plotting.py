"""Report figures rendered with matplotlib's Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FLOOR = 1e-18


def residual_figure(report, path) -> Path:
    """Residual per check on a log scale, failed checks in red."""
    recs = [r for r in report.records if r.residual is not None]
    fig, ax = plt.subplots(figsize=(8, 0.35 * max(len(recs), 4) + 1.2))
    if recs:
        vals = [max(float(r.residual), FLOOR) if np.isfinite(r.residual) else 1.0 for r in recs]
        colors = ["tab:green" if r.passed else "tab:red" for r in recs]
        y = np.arange(len(recs))
        ax.barh(y, vals, color=colors)
        ax.set_yticks(y, [r.name for r in recs], fontsize=7)
        ax.set_xscale("log")
        ax.invert_yaxis()
    ax.set_xlabel("residual")
    ax.set_title(f"{report.scenario}: {report.summary()['passed']}/{len(report.records)} passed")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def growth_figure(table, path, title: str = "dimension by order") -> Path:
    """``dim M`` and ``dim M^perp`` against the truncation order."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(table.orders, table.dims, "o-", label="M")
    ax.plot(table.orders, table.perp_dims, "s--", label="complement")
    ax.set_xlabel("order N")
    ax.set_ylabel("dimension")
    ax.set_title(f"{title} ({table.classification}, heuristic)")
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def singular_value_figure(values, path, threshold: float | None = None,
                          title: str = "defect operator singular values") -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    v = np.maximum(np.asarray(values, dtype=float), FLOOR)
    ax.semilogy(np.arange(1, v.size + 1), v, "o")
    if threshold is not None:
        ax.axhline(threshold, color="tab:red", ls=":", label="rank threshold")
        ax.legend()
    ax.set_xlabel("index")
    ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def kernel_grid_figure(values: np.ndarray, path, title: str = "|K(z, w)|") -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 4))
    im = ax.imshow(np.abs(values), origin="lower", cmap="viridis")
    fig.colorbar(im, ax=ax)
    ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
