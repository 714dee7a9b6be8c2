"""Decomposable electromagnetic media in four-dimensional differential-form notation.

Submodules: :mod:`exterior` (fixed-basis exterior algebra), :mod:`dyadics`
(tagged linear maps, compounds, the axion/skewon/principal split),
:mod:`media` (constructors, the decomposability condition, 3D views),
:mod:`waves` (dispersion and plane waves) and :mod:`cli`.
"""

__version__ = "0.1.0"

from . import dyadics, exterior, media, waves  # noqa: E402

__all__ = ["exterior", "dyadics", "media", "waves", "__version__"]
