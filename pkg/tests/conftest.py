import numpy as np

from stubmatch.degrees import MarkedConfig
from stubmatch.pointsets import INTERVAL, PointConfig, Topology


def make_marked(pos, extent, degrees, kind=INTERVAL, rights=None):
    """MarkedConfig from plain python lists; degrees may be a scalar."""
    pos = np.asarray(pos, dtype=np.float64)
    cfg = PointConfig(Topology(kind, float(extent)), pos)
    if np.isscalar(degrees):
        degrees = np.full(pos.size, degrees, dtype=np.int64)
    else:
        degrees = np.asarray(degrees, dtype=np.int64)
    if rights is not None:
        rights = np.asarray(rights, dtype=np.int64)
    return MarkedConfig(cfg, degrees, rights)
