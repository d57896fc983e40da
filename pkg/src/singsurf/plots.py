"""Figure rendering for the report commands.

Every function takes a finished report dict and writes one PNG.  The
Agg backend keeps rendering headless, and the PNG metadata is stripped
so figures stay as reproducible as the backend allows; the delimited
output remains the primary, byte-stable artifact.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "gauss_bonnet_figure",
    "breakdown_figure",
    "quadrilateral_figure",
    "disc_asymptotics_figure",
    "spectrum_figure",
    "conjecture_figure",
    "polyhedron_figure",
]


def _save(fig, path):
    fig.savefig(path, dpi=130, format="png", metadata={"Software": None})
    plt.close(fig)


def gauss_bonnet_figure(report, path):
    parts = {
        "smooth": report["absolutely_continuous_mass"],
        "seam": report["seam_mass"],
        "atoms": report["atom_mass"],
        "total": report["total_mass"],
    }
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.bar(range(len(parts)), list(parts.values()), color="#4878a8")
    ax.axhline(report["target"], color="#b0413e", linestyle="--",
               label=f"target {report['target']:.6g}")
    ax.set_xticks(range(len(parts)), list(parts.keys()))
    ax.set_ylabel("curvature mass")
    ax.set_title(f"total curvature vs 2πχ, defect {report['defect']:.2e}")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def breakdown_figure(report, path):
    parts = {
        "smooth": report["absolutely_continuous"],
        "seam": report["seam"],
        "atoms": report["atom"],
        "total": report["total"],
    }
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.bar(range(len(parts)), list(parts.values()), color="#4878a8")
    ax.set_xticks(range(len(parts)), list(parts.keys()))
    ax.set_ylabel("curvature mass")
    ax.set_title("measure of the requested region")
    fig.tight_layout()
    _save(fig, path)


def quadrilateral_figure(report, path):
    labels = ["x side 1", "y side 1", "x side 2", "y side 2"]
    angles = [report["angle_x_side1"], report["angle_y_side1"],
              report["angle_x_side2"], report["angle_y_side2"]]
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.bar(range(4), angles, color="#4878a8")
    ax.axhline(math.pi / 2, color="#666666", linestyle=":", label="right angle")
    ax.set_xticks(range(4), labels)
    ax.set_ylabel("foot angle (rad)")
    ax.set_title(
        f"surplus {report['angle_surplus']:.6g} vs "
        f"predicted {report['predicted_surplus']:.6g}")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def disc_asymptotics_figure(report, path):
    r = np.asarray(report["radii"])
    area = np.asarray(report["areas_total"])
    c2 = report["quadratic_coefficient"]
    c3 = report["cubic_coefficient"]
    c4 = report["quartic_coefficient"]
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.plot(r, area / r ** 2, "o", color="#4878a8", label="measured area / r²")
    rr = np.linspace(r[0], r[-1], 200)
    ax.plot(rr, c2 + c3 * rr + c4 * rr ** 2, "-", color="#b0413e",
            label="fitted c₂ + c₃ r + c₄ r²")
    ax.axhline(math.pi, color="#666666", linestyle=":", label="π")
    ax.set_xlabel("radius r")
    ax.set_ylabel("ball area / r²")
    ax.set_title(f"seam-point ball areas, 3|c₃| = {3 * abs(c3):.4g}")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def spectrum_figure(eigenvalues, slope, label, path):
    eigs = np.asarray(eigenvalues)
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.step(eigs, np.arange(1, eigs.size + 1), where="post",
            color="#4878a8", label="N(t)")
    tt = np.linspace(0.0, float(eigs[-1]), 200)
    ax.plot(tt, slope * tt, "--", color="#b0413e",
            label="Area t / 4π")
    ax.set_xlabel("t")
    ax.set_ylabel("count")
    ax.set_title(label)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def conjecture_figure(report, path):
    ts = np.asarray(report["grid_t"])
    avg = np.asarray(report["grid_average_error"])
    c0 = report["constant_term"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax1.semilogx(ts, avg, "-", color="#4878a8", lw=1.0)
    ax1.axhline(c0, color="#b0413e", linestyle="--", label=f"c₀ = {c0:.4g}")
    ax1.set_xlabel("t")
    ax1.set_ylabel("averaged error A(t)")
    ax1.legend()
    tail = ts >= ts[-1] / 10.0
    res = np.abs(avg - c0)
    keep = tail & (res > 0)
    ax2.loglog(ts[keep], res[keep], "o", ms=3, color="#4878a8")
    p = report["decay_exponent"]
    if math.isfinite(p) and np.any(keep):
        ref = res[keep][-1] * (ts[keep] / ts[keep][-1]) ** (-p)
        ax2.loglog(ts[keep], ref, "--", color="#b0413e",
                   label=f"slope −p, p = {p:.3g}")
        ax2.legend()
    ax2.set_xlabel("t (top decade)")
    ax2.set_ylabel("|A(t) − c₀|")
    fig.suptitle(report["domain"])
    fig.tight_layout()
    _save(fig, path)


def polyhedron_figure(report, path):
    masses = report["masses"]
    names = sorted(masses)
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.bar(range(len(names)), [masses[n] for n in names], color="#4878a8")
    ax.set_xticks(range(len(names)), names, rotation=45, ha="right")
    ax.set_ylabel("angle defect (rad)")
    ax.set_title(
        f"vertex atoms, total {report['total_mass']:.6g} "
        f"vs 2πχ = {report['target']:.6g}")
    fig.tight_layout()
    _save(fig, path)
