"""Calibrated conventions shared by every module.

Two choices are not fixed by the definitions alone and were settled by
experiment (see ``calibrate_reflection_side`` in :mod:`alcovekit.alcoves` and
``calibrate_direction`` in :mod:`alcovekit.periodic`):

* ``REFLECTION_SIDE``: whether the reflection composite attached to a coroot
  acts on the left (``s_theta w``) or the right (``w s_theta``) of ``w``.
* ``STABILIZATION_DIRECTION``: the sign of the translation ``+-2 rho`` along
  which finite h-polynomials stabilise to generic ones.

Both values are stamped into CLI output.
"""

REFLECTION_SIDE = "right"
STABILIZATION_DIRECTION = 1


def as_dict() -> dict:
    return {
        "reflection_side": REFLECTION_SIDE,
        "stabilization_direction": "+2rho" if STABILIZATION_DIRECTION > 0 else "-2rho",
    }
