import numpy as np


class _CheckShape:
    """Checks that a batch matches the width a layer or network expects."""

    def __init__(self, x, width, name="input"):
        self.x = x
        self.width = width
        self.name = name

    def __call__(self):
        x = np.asarray(self.x, dtype=np.float64)
        if x.ndim != 2:
            raise ValueError(
                "Expected a 2-D batch `{}`, found shape {}".format(self.name, x.shape)
            )
        if x.shape[1] != self.width:
            raise ValueError(
                "Shape mismatch, `{}` must have {} columns, found {}".format(
                    self.name, self.width, x.shape[1]
                )
            )
        return x


def check_congruent(params, grads):
    """Check that gradients mirror the parameter layout."""
    if len(params) != len(grads):
        raise ValueError(
            "Expected {} gradient arrays, found {}".format(len(params), len(grads))
        )
    for i, (p, g) in enumerate(zip(params, grads)):
        if np.shape(p) != np.shape(g):
            raise ValueError(
                "Gradient {} has shape {}, parameter has shape {}".format(
                    i, np.shape(g), np.shape(p)
                )
            )
