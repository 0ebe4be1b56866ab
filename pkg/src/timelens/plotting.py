"""Deterministic SVG overlays of normalized spectra."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import DomainError  # noqa: E402


def emit_plot(report, path):
    """Overlay the peak-normalized spectra of ``report`` against wavelength.

    Output bytes depend only on the inputs and the matplotlib version: the SVG
    id salt is fixed and the date stamp omitted.

    Raises
    ------
    DomainError
        If the report holds no spectra.
    """
    spectra = list(getattr(report, "spectra", report))
    if not spectra:
        raise DomainError("nothing to plot: the report contains no spectra")
    with matplotlib.rc_context({"svg.hashsalt": "timelens", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        lo, hi = np.inf, -np.inf
        for s in spectra:
            y = s.intensity / s.intensity.max()
            wl = s.wavelength
            ax.plot(wl, y, label=s.label, lw=1.2)
            above = wl[y > 1e-3]
            lo, hi = min(lo, above.min()), max(hi, above.max())
        pad = 0.1 * (hi - lo)
        ax.set_xlim(lo - pad, hi + pad)
        ax.set_xlabel("wavelength [nm]")
        ax.set_ylabel("normalized intensity")
        ax.legend(frameon=False, fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
