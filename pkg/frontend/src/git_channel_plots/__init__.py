"""Static figure rendering for the gravity-induced-channel CSV outputs.

This package contains no physics beyond axis transforms and the documented
low-frequency boundary line Q = w_T * omega_B / w_G^2 drawn as an annotation;
every plotted number comes from the CSV files produced by the computation
package.
"""

__version__ = "0.1.0"

from .render import (BoundaryMismatch, FigureSpec, SchemaError, render,
                     render_all)

__all__ = ["FigureSpec", "SchemaError", "BoundaryMismatch", "render",
           "render_all", "__version__"]
