"""Static figures written next to the CSV outputs (Agg backend, no display)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    # fixed metadata keeps reruns byte-identical
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)
    return path


def bloch_path(path, points, title="Bloch-sphere path"):
    pts = np.asarray(points)
    fig = plt.figure(figsize=(5, 5))
    ax = fig.add_subplot(projection="3d")
    u, v = np.mgrid[0:2 * np.pi:40j, 0:np.pi:20j]
    ax.plot_wireframe(np.cos(u) * np.sin(v), np.sin(u) * np.sin(v), np.cos(v),
                      color="0.85", linewidth=0.4)
    ax.plot(pts[:, 0], pts[:, 1], pts[:, 2], color="C3", linewidth=1.8)
    ax.scatter(*pts[0], color="k", s=20)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.set_box_aspect((1, 1, 1))
    ax.set_title(title)
    return _save(fig, path)


def populations(path, times, series, title="Populations"):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for label, y in series.items():
        ax.plot(times, y, label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("population")
    ax.set_title(title)
    ax.legend()
    return _save(fig, path)


def calibration(path, table):
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    ax.plot(table.theta, table.unwrapped, "o-", ms=3, label="simulated")
    ax.plot(table.theta, np.unwrap(table.formula_gamma), "--", label="4 arctan(2w/d)")
    ax.set_xlabel("tilt theta")
    ax.set_ylabel("gamma")
    ax.legend()
    return _save(fig, path)


def robustness(path, rows):
    sig = np.array([s for s, _ in rows])
    inf = np.array([max(1 - st.fidelity_mean, 1e-300) for _, st in rows])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.loglog(sig, inf, "o-", label="mean infidelity")
    if len(sig) and sig[0] > 0:
        ax.loglog(sig, inf[0] * (sig / sig[0]) ** 2, ":", label="sigma^2")
    ax.set_xlabel("sigma")
    ax.set_ylabel("1 - F")
    ax.legend()
    return _save(fig, path)
