"""Static SVG of the rotation-curve contributions to v^2."""

from __future__ import annotations

import logging
from typing import Sequence

from scale_dynamics.kepler import RotationCurveRow
from shared import defaults as DEFAULTS

logger = logging.getLogger(__name__)

_POINTS_PER_INCH = 72.0


def write_rotation_svg(
    rows: Sequence[RotationCurveRow], path: str, log_x: bool, title: str
) -> None:
    """GM/r, (GM/r0)(1 - r0/r) and their constant sum against r.

    Output is byte-stable: fixed hash salt for element ids, no date metadata.
    """
    # pylint: disable=import-outside-toplevel
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

    radii = [row.r for row in rows]
    with matplotlib.rc_context(
        {"svg.hashsalt": DEFAULTS.PLOT_HASH_SALT, "svg.fonttype": "path"}
    ):
        fig, ax = plt.subplots(
            figsize=(
                DEFAULTS.PLOT_WIDTH_PX / _POINTS_PER_INCH,
                DEFAULTS.PLOT_HEIGHT_PX / _POINTS_PER_INCH,
            )
        )
        try:
            ax.plot(radii, [row.u_over_m for row in rows], label="-U/m = GM/r")
            ax.plot(
                radii,
                [row.uadd_over_m for row in rows],
                label="-U_add/m = (GM/r0)(1 - r0/r)",
            )
            ax.plot(radii, [row.vsq_total for row in rows], label="v^2 = GM/r0")
            if log_x:
                ax.set_xscale("log")
            ax.set_xlabel("r")
            ax.set_ylabel("v^2")
            ax.set_title(title)
            ax.legend(loc="upper right")
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    logger.debug("figure written", extra={"path": path, "points": len(rows)})
