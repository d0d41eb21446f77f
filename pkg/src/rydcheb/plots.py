"""Matplotlib figure renderers for the CLI report paths.

Every renderer writes one file and returns its path; none of them touch
interactive backends.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def wavefunction_figure(path, r, u_num, u_langer, u_fock, state, energy):
    """Two-panel comparison: full range vs expanded view around the origin."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.5, 4.0))
    ax1.plot(r, u_num, "-", color="crimson", lw=1.0, label="collocation")
    ax1.plot(r, u_langer, "--", color="royalblue", lw=1.0, label="turning-point uniform")
    ax1.set_xlabel(r"$r$  ($a_B$)")
    ax1.set_ylabel(r"$U(r)$")
    ax1.legend(frameon=False, fontsize=8)
    ax1.set_title(f"n={state.n}, l={state.l}, j={state.j}, E={energy:.6g} Ry", fontsize=9)

    zoom = r <= min(8.0, 0.05 * r.max())
    ax2.plot(r[zoom], u_num[zoom], "-", color="crimson", lw=1.0, label="collocation")
    ax2.plot(r[zoom], u_langer[zoom], "--", color="royalblue", lw=1.0,
             label="turning-point uniform")
    if u_fock is not None:
        ax2.plot(r[zoom], u_fock[zoom], ":", color="seagreen", lw=1.4,
                 label="origin uniform")
    ax2.set_xlabel(r"$r$  ($a_B$)")
    ax2.set_title("expanded view around the origin", fontsize=9)
    ax2.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def momentum_figure(path, curves, l):
    """Classical momentum sqrt(-Q) vs r/r_c(l) deep in the core.

    curves: list of (label, r_over_rc, momentum) tuples.  Regions where the
    momentum is real appear as lobes; a second lobe below the main classical
    region is the core anomaly.
    """
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    styles = [("-", "crimson"), ("--", "royalblue"), (":", "seagreen")]
    for (label, x, p), (ls, color) in zip(curves, styles):
        ax.plot(x, p, ls, color=color, lw=1.2, label=label)
    ax.set_xlabel(r"$r / r_c(l)$")
    ax.set_ylabel(r"$\sqrt{-Q(r)}$  ($\sqrt{\mathrm{Ry}}$)")
    ax.set_title(f"classical momentum inside the core, l={l}", fontsize=9)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def defects_figure(path, rows):
    """Numeric vs quasiclassical defects per (l, j); log scale carries l=3,4."""
    fig, ax = plt.subplots(figsize=(5.6, 3.8))
    ls = sorted({row["l"] for row in rows})
    for row in rows:
        off = 0.08 if row["j"] > row["l"] else -0.08
        if row.get("defect_numeric") is not None:
            ax.semilogy(row["l"] + off, max(row["defect_numeric"], 1e-6), "o",
                        color="crimson", ms=5,
                        label="collocation" if row is rows[0] else None)
        if row.get("defect_quasiclassical") is not None:
            ax.semilogy(row["l"] + off, max(row["defect_quasiclassical"], 1e-6), "s",
                        color="royalblue", ms=5, mfc="none",
                        label="quasiclassical" if row is rows[0] else None)
    ax.set_xticks(ls)
    ax.set_xlabel("orbital angular momentum l")
    ax.set_ylabel("quantum defect")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def hyperfine_figure(path, ns, scaled, mean, isotope):
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    ax.plot(ns, scaled, "o", color="crimson", ms=5)
    ax.axhline(mean, color="royalblue", lw=1.0, ls="--",
               label=f"mean {mean:.4f} GHz")
    ax.set_xlabel("principal quantum number n")
    ax.set_ylabel(r"$|A/h| \, (n-\delta_0)^3$  (GHz)")
    ax.set_title(f"scaled hyperfine constant, {isotope}", fontsize=9)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
