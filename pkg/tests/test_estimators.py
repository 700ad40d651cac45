import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from cobreak.estimators import ChannelTransformer, CoherenceBreakingAnalyzer, UnitaryAmender
from cobreak.exceptions import ArgumentError, ValidationError
from cobreak.qchannel import dephasing_channel, identity_channel
from cobreak.qstate import random_state

PLUS = np.full((2, 2), 0.5)


def test_get_params_and_clone(z_contraction):
    est = UnitaryAmender(z_contraction, strategy="post", grid_size=4)
    params = est.get_params()
    assert params["strategy"] == "post" and params["grid_size"] == 4 and params["channel"] is z_contraction
    copy = clone(est)
    assert copy.get_params()["grid_size"] == 4 and not hasattr(copy, "result_")
    est.set_params(grid_size=6)
    assert est.grid_size == 6


def test_channel_transformer(z_contraction):
    out = ChannelTransformer(z_contraction).fit_transform(PLUS)
    np.testing.assert_allclose(out, [np.eye(2) / 2], atol=1e-15)
    X = np.array([random_state(2, s) for s in range(5)])
    np.testing.assert_allclose(ChannelTransformer(identity_channel(2)).fit(X).transform(X), X, atol=1e-12)


def test_channel_transformer_power(nilpotent):
    out = ChannelTransformer(nilpotent, power=2).fit_transform(np.array([[0.5, -0.5j], [0.5j, 0.5]]))
    np.testing.assert_allclose(out[0], np.eye(2) / 2, atol=1e-15)
    with pytest.raises(ArgumentError):
        ChannelTransformer(nilpotent, power=0).fit()


def test_transform_validates_input(z_contraction):
    est = ChannelTransformer(z_contraction).fit()
    with pytest.raises(ValidationError):
        est.transform(np.eye(2))
    with pytest.raises(ValidationError):
        est.transform(np.eye(3) / 3)


def test_not_fitted(z_contraction):
    with pytest.raises(NotFittedError):
        ChannelTransformer(z_contraction).transform(PLUS)


def test_bad_channel():
    with pytest.raises(ArgumentError):
        ChannelTransformer(np.eye(2)).fit()


def test_analyzer_attributes(z_contraction, nilpotent):
    fitted = CoherenceBreakingAnalyzer(nilpotent).fit()
    assert fitted.is_cbc_ is False and fitted.index_ == 2 and fitted.nc_
    assert fitted.trail_[:2] == [False, True]
    assert fitted.witness_.coherence > 1e-9
    assert CoherenceBreakingAnalyzer(z_contraction).fit().is_cbc_


def test_analyzer_transform_gives_output_coherence(nilpotent):
    X = np.array([PLUS, np.array([[0.5, -0.5j], [0.5j, 0.5]])])
    np.testing.assert_allclose(CoherenceBreakingAnalyzer(nilpotent).fit(X).transform(X), [0, 0.8], atol=1e-15)


def test_amender_strategies(z_contraction, nilpotent, depolarizing):
    post = UnitaryAmender(z_contraction).fit()
    assert post.success_
    with pytest.warns(RuntimeWarning, match="non-coherence-generating"):
        assert CoherenceBreakingAnalyzer(post.amended_).fit().is_cbc_ is False
    inter = UnitaryAmender(nilpotent, strategy="interleaved").fit()
    assert inter.success_
    out = inter.transform(np.array([[0.5, -0.5j], [0.5j, 0.5]]))
    assert abs(out[0, 0, 1]) > 1e-9
    square = UnitaryAmender(nilpotent, strategy="post_square", samples=4).fit()
    assert not square.success_ and square.result_.certificate
    with pytest.raises(ArgumentError, match="no amending unitary"):
        square.transform(PLUS)
    assert not UnitaryAmender(depolarizing).fit().success_
    with pytest.raises(ArgumentError, match="unknown strategy"):
        UnitaryAmender(z_contraction, strategy="prepend").fit()


def test_pipeline():
    pipe = make_pipeline(ChannelTransformer(dephasing_channel(2)), CoherenceBreakingAnalyzer(identity_channel(2)))
    X = np.array([random_state(2, s, "pure") for s in range(4)])
    np.testing.assert_allclose(pipe.fit_transform(X), 0, atol=1e-15)
