"""Optional matplotlib renderings for the report-style CLI paths.

Figures are side outputs: the delimited text remains the interchange
format, and nothing here is imported unless a figure path is requested.
"""

from __future__ import annotations

from typing import Sequence


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def sweep_figure(rows: Sequence[dict], path: str) -> None:
    """lambda_1 / lambda_2 and the rational bound against the anisotropy ratio."""
    plt = _pyplot()
    ratios = [r["ratio"] for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.semilogx(ratios, [r["lambda1"] for r in rows], "o-", label="lambda1")
    ax.semilogx(ratios, [r["lambda2"] for r in rows], "s--", label="lambda2")
    ax.semilogx(
        ratios, [r["rational_bound"] for r in rows], ":", label="rational bound"
    )
    ax.set_xlabel("a1 / a2")
    ax.set_ylabel("eigenvalue")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def decay_figure(
    radii: Sequence[float],
    omega: Sequence[float],
    fitted: float,
    predicted: float,
    path: str,
) -> None:
    """omega(rho) against rho with the fitted and predicted slopes."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.loglog(radii, omega, "o", label="measured")
    r0, w0 = radii[len(radii) // 2], omega[len(omega) // 2]
    guide = [w0 * (r / r0) ** fitted for r in radii]
    ax.loglog(radii, guide, "-", label=f"fit slope {fitted:.4f}")
    guide_p = [w0 * (r / r0) ** predicted for r in radii]
    ax.loglog(radii, guide_p, "--", label=f"predicted {predicted:.4f}")
    ax.set_xlabel("rho")
    ax.set_ylabel("omega(rho)")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def perturb_figure(rows: Sequence[dict], path: str) -> None:
    """Prediction errors against eps with quadratic/cubic slope guides."""
    plt = _pyplot()
    eps = [r["eps"] for r in rows]
    e1 = [max(r["err_first"], 1e-18) for r in rows]
    e2 = [max(r["err_second"], 1e-18) for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.loglog(eps, e1, "o-", label="first-order error")
    ax.loglog(eps, e2, "s-", label="second-order error")
    ax.loglog(eps, [e1[0] * (x / eps[0]) ** 2 for x in eps], ":", label="slope 2")
    ax.loglog(eps, [e2[0] * (x / eps[0]) ** 3 for x in eps], ":", label="slope 3")
    ax.set_xlabel("eps")
    ax.set_ylabel("|direct - prediction|")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
