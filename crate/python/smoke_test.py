"""Smoke test for the semidyn extension module.

Build and install it first, e.g.
    pip install maturin && maturin develop --release -m crates/python/Cargo.toml
then run this file with python or pytest.
"""

import json

import pytest

import semidyn


def test_rational_map_basics():
    f = semidyn.RationalMap("2*z - 1/z")
    assert str(f) == "(2*z^2-1)/z"
    assert f.degree == 2
    assert f.parity() == "odd"
    assert f == semidyn.RationalMap("(2*z^2-1)/z")
    assert f(1) == 1
    assert f(0) is None
    assert f.compose(f).parity() == "odd"
    even = f.compose("z^2")
    assert even.degree == 4
    assert even.parity() == "even"
    assert even.even_decompose() == f


def test_lift_and_semiconjugacy():
    f_tilde = semidyn.lift("(2*z^2-1)/z")
    assert f_tilde == semidyn.RationalMap("(3*z+5*z^2)/(1+3*z+4*z^2)")
    assert str(semidyn.lift("(z^2-1)/(2*z)")) == "2*z^2-1"
    assert semidyn.verify_semiconjugacy("(2*z^2-4)/z", "(37*z^2-24*z+3)/(35*z^2-24*z+5)")
    assert not semidyn.verify_semiconjugacy("(2*z^2-4)/z", "(5*z^2+40*z-29)/(3*z^2+40*z-27)")
    with pytest.raises(ValueError):
        semidyn.lift("z^2")


def test_conjugation_and_commutation():
    assert str(semidyn.conjugate("2*z^2-1", "2*z")) == "z^2-2"
    assert semidyn.find_commutation_moebius("z^2-2", "4*z^2-2") is None
    assert semidyn.find_commutation_moebius("-z^2", "z^2") is not None


def test_numerics():
    cloud = semidyn.backward_orbit(["z^2-2"], orbit_length=20_000, seed=1)
    assert len(cloud) == 19_900
    segment = [complex(-2 + k * 1e-3, 0) for k in range(4001)]
    assert semidyn.hausdorff(cloud, segment) <= 0.02
    repelling = semidyn.repelling_fixed_points(["z^2-2"], word_length=1)
    assert sorted(z.real for z in repelling) == pytest.approx([-1.0, 2.0], abs=1e-9)
    assert semidyn.spherical_dist(0, None) == pytest.approx(2.0)
    assert cloud == semidyn.backward_orbit(["z^2-2"], orbit_length=20_000, seed=1)


def test_run_example():
    report = json.loads(semidyn.run_example(2, orbit_length=20_000, resolution=200))
    assert report["experiment"] == "example2"
    assert report["pass"] is True


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
