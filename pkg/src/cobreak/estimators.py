"""scikit-learn compatible wrappers.

The channel is a hyper-parameter; ``X`` is always a batch of density
matrices of shape ``(n_samples, d, d)`` (a single ``(d, d)`` matrix is
promoted).  This lets channels sit in a :class:`sklearn.pipeline.Pipeline`
and be cloned or grid-searched like any other estimator.

>>> from cobreak import ChannelTransformer, AffineRep
>>> import numpy as np
>>> z_contraction = AffineRep(np.diag([0.0, 0.0, 0.5]), np.zeros(3))
>>> ChannelTransformer(z_contraction).fit_transform(np.full((2, 2), 0.5)).round(3)[0].real
array([[0.5, 0. ],
       [0. , 0.5]])
"""

import warnings

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .amendment import (
    amend_search_interleaved,
    amend_search_post,
    impossibility_post_square,
    interleave,
    unitary_affine,
)
from .analysis import DEFAULT_CAP, cbc_index, is_cbc_oracle, is_cbc_structural, is_nc
from .exceptions import ArgumentError, ConsistencyError
from .qchannel import AffineRep, KrausChannel, affine_apply, apply, compose, iterate, to_affine, validate_cptp
from .qstate import _offdiag_l1
from .validation import check_density_matrices

__all__ = ["ChannelTransformer", "CoherenceBreakingAnalyzer", "UnitaryAmender"]


def _check_channel(channel):
    if not isinstance(channel, (KrausChannel, AffineRep)):
        raise ArgumentError(
            f"channel must be a KrausChannel or AffineRep, got {type(channel).__name__}"
        )
    return channel


def _apply_batch(channel, X):
    return np.array([apply(channel, rho) for rho in X])


class ChannelTransformer(TransformerMixin, BaseEstimator):
    """Apply a fixed channel to batches of density matrices.

    Parameters
    ----------
    channel : KrausChannel or AffineRep
        The channel to apply.
    power : int, default=1
        Apply the ``power``-fold iterate instead.
    """

    def __init__(self, channel=None, power=1):
        self.channel = channel
        self.power = power

    def fit(self, X=None, y=None):
        ch = _check_channel(self.channel)
        if int(self.power) != self.power or self.power < 1:
            raise ArgumentError(f"power must be a positive integer, got {self.power!r}")
        if X is not None:
            check_density_matrices(X, dim=ch.dim)
        self.dim_ = ch.dim
        if self.power == 1:
            self.channel_ = ch
        else:
            self.channel_ = iterate(ch, self.power)
        return self

    def transform(self, X):
        check_is_fitted(self, "channel_")
        X = check_density_matrices(X, dim=self.dim_)
        return _apply_batch(self.channel_, X)


class CoherenceBreakingAnalyzer(TransformerMixin, BaseEstimator):
    """Fit-style summary of a channel's coherence-breaking behaviour.

    ``fit`` takes the channel itself (``X`` is ignored except for validation
    of its dimension) and records the attributes below.  ``transform`` maps
    states to the l1 coherence of their images.

    Attributes
    ----------
    affine_ : AffineRep
    cptp_ : CptpReport
    nc_ : bool
    is_cbc_ : bool
        Structural verdict; cross-checked against the oracle route.
    index_ : int or "exceeds_cap"
    trail_ : list of bool
    """

    def __init__(self, channel=None, max_k=DEFAULT_CAP):
        self.channel = channel
        self.max_k = max_k

    def fit(self, X=None, y=None):
        ch = _check_channel(self.channel)
        if X is not None:
            check_density_matrices(X, dim=ch.dim)
        self.affine_ = to_affine(ch)
        self.cptp_ = validate_cptp(ch)
        self.nc_ = is_nc(self.affine_)
        structural = is_cbc_structural(self.affine_)
        oracle = is_cbc_oracle(ch)
        if structural.is_cbc != oracle.is_cbc:
            raise ConsistencyError("structural and oracle CBC routes disagree")
        self.is_cbc_ = structural.is_cbc
        self.witness_ = oracle.witness
        with warnings.catch_warnings():
            if self.nc_:
                warnings.simplefilter("ignore")
            result = cbc_index(self.affine_, cap=self.max_k)
        self.index_ = result.index
        self.trail_ = result.trail
        return self

    def transform(self, X):
        """Output l1 coherence for each input state, shape ``(n_samples,)``."""
        check_is_fitted(self, "affine_")
        X = check_density_matrices(X, dim=self.affine_.dim)
        return np.array([_offdiag_l1(affine_apply(self.affine_, rho)) for rho in X])


_SEARCHES = {
    "post": lambda a, est: amend_search_post(a, grid_size=est.grid_size),
    "interleaved": lambda a, est: amend_search_interleaved(a, grid_size=est.grid_size, depth=2),
    "interleaved_general": lambda a, est: amend_search_interleaved(a, grid_size=est.grid_size, depth=est.depth),
    "post_square": lambda a, est: impossibility_post_square(
        a, samples=est.samples, seed=est.random_state, grid_size=est.grid_size
    ),
}


class UnitaryAmender(TransformerMixin, BaseEstimator):
    """Search for a unitary that amends a coherence-breaking channel.

    Parameters
    ----------
    channel : KrausChannel or AffineRep
    strategy : {"post", "interleaved", "interleaved_general", "post_square"}
    grid_size : int, default=8
    depth : int, default=3
        Copies of the channel for ``"interleaved_general"``.
    samples : int, default=64
        Random unitaries tried by ``"post_square"``.
    random_state : int, default=0

    After ``fit``, ``result_`` holds the :class:`AmendmentResult` and
    ``amended_`` the composite channel (``None`` when the search failed).
    ``transform`` applies the amended channel to states.
    """

    def __init__(self, channel=None, strategy="post", grid_size=8, depth=3, samples=64, random_state=0):
        self.channel = channel
        self.strategy = strategy
        self.grid_size = grid_size
        self.depth = depth
        self.samples = samples
        self.random_state = random_state

    def fit(self, X=None, y=None):
        ch = _check_channel(self.channel)
        if self.strategy not in _SEARCHES:
            raise ArgumentError(f"unknown strategy {self.strategy!r}; expected one of {sorted(_SEARCHES)}")
        if X is not None:
            check_density_matrices(X, dim=ch.dim)
        a = to_affine(ch)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            self.result_ = _SEARCHES[self.strategy](a, self)
        self.amended_ = None
        if self.result_.success:
            lam = unitary_affine(self.result_.unitary)
            if self.strategy == "post":
                self.amended_ = compose(lam, a)
            elif self.strategy == "post_square":
                self.amended_ = compose(lam, iterate(a, 2))
            else:
                depth = 2 if self.strategy == "interleaved" else self.depth
                self.amended_ = interleave(a, lam, depth)
        self.dim_ = a.dim
        return self

    @property
    def success_(self):
        check_is_fitted(self, "result_")
        return self.result_.success

    def transform(self, X):
        check_is_fitted(self, "result_")
        if self.amended_ is None:
            raise ArgumentError("no amending unitary was found; nothing to apply")
        X = check_density_matrices(X, dim=self.dim_)
        return _apply_batch(self.amended_, X)
