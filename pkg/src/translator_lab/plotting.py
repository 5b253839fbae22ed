"""Figure rendering for the CLI report path."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import DomainError, IoError
from .translators import Translator


def render_profile_figure(translator: Translator, path: str) -> str:
    """Two-panel figure: tau against s and the height profile, with
    singular marks annotated. Returns the written path."""
    if translator.degenerate:
        raise DomainError("degenerate translator has nothing to plot")
    fig, (ax_tau, ax_phi) = plt.subplots(1, 2, figsize=(10, 4))
    for branch in translator.branches:
        p = branch.profile
        sign = -1.0 if branch.reflected else 1.0
        label = f"{'reflected ' if branch.reflected else ''}branch"
        ax_tau.plot(p.s, p.tau, lw=1.0, label=label)
        ax_phi.plot(p.s, sign * p.phi, lw=1.0, label=label)
        for mark in p.singular_marks:
            for ax in (ax_tau, ax_phi):
                ax.axvline(mark.s_loc, color="crimson", ls=":", lw=0.8)
    ax_tau.set_xlabel("s")
    ax_tau.set_ylabel("tau")
    ax_tau.axhline(0.0, color="gray", lw=0.5)
    ax_phi.set_xlabel("s")
    ax_phi.set_ylabel("height")
    ax_tau.legend(fontsize=8)
    fig.suptitle(translator.spec.kind)
    fig.tight_layout()
    try:
        fig.savefig(path, dpi=120)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)
    return path
