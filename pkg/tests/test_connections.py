"""Spray, nonlinear connection, and linear connection against the
Riemannian oracle and the structural certificates."""

import numpy as np
import pytest

import riemann_oracle as oracle
from finslerkit import connections as cn
from finslerkit.chart import ChartPoint
from finslerkit.fields import tautological_field
from finslerkit.frame import point_frame
from finslerkit.structures import by_name, sphere2

from conftest import CATALOG_NAMES

SPHERE_POINTS = sphere2().sample(5, seed=31)


class TestRiemannianOracleMatch:
    """On a Riemannian structure the whole tower has classical closed forms."""

    @pytest.mark.parametrize("p", SPHERE_POINTS, ids=range(len(SPHERE_POINTS)))
    def test_linear_coefficients_are_christoffels(self, p):
        fr = point_frame(sphere2(), p)
        gam = oracle.sphere_christoffel(p.x)
        assert np.abs(fr.F - gam).max() < 1e-12

    @pytest.mark.parametrize("p", SPHERE_POINTS, ids=range(len(SPHERE_POINTS)))
    def test_spray_and_nonlinear_connection(self, p):
        fr = point_frame(sphere2(), p)
        gam = oracle.sphere_christoffel(p.x)
        y = np.array(p.y)
        assert np.abs(fr.G - 0.5 * np.einsum("ijk,j,k->i", gam, y, y)).max() < 1e-12
        assert np.abs(fr.N - np.einsum("ijm,m->ij", gam, y)).max() < 1e-12

    def test_fd_oracle_agrees_too(self):
        p = SPHERE_POINTS[0]
        fr = point_frame(sphere2(), p)
        assert np.abs(fr.F - oracle.christoffel(oracle.sphere_metric, np.array(p.x))).max() < 1e-8

    def test_metric_matches_coefficients(self):
        p = SPHERE_POINTS[1]
        fr = point_frame(sphere2(), p)
        assert np.abs(fr.g - oracle.sphere_metric(p.x)).max() < 1e-12
        # Riemannian structures have no fiber dependence in g
        assert np.abs(fr.C3).max() < 1e-12


class TestStructuralCertificates:
    @pytest.mark.parametrize("name", CATALOG_NAMES + ["euclidean3", "minkowski_quartic3"])
    def test_spray_certificate(self, name):
        s = by_name(name)
        for p in s.sample(4, seed=13):
            assert cn.spray_defect(s, p) < 1e-10

    def test_spray_certificate_flags_wrong_spray(self):
        s = sphere2()
        p = SPHERE_POINTS[2]
        good = point_frame(s, p).G
        assert cn.spray_defect(s, p, G=good) < 1e-10
        assert cn.spray_defect(s, p, G=good + 0.05) > 1e-3

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_conservativity(self, name):
        s = by_name(name)
        for p in s.sample(4, seed=13):
            assert cn.conservativity_defect(s, p) < 1e-10

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_barthel_torsion_free(self, name):
        s = by_name(name)
        for p in s.sample(4, seed=13):
            fr = point_frame(s, p)
            dN = np.empty((s.n, s.n, s.n))
            for i in range(s.n):
                for j in range(s.n):
                    for k in range(s.n):
                        dN[i, j, k] = fr.N_jets[i][j].partial1(s.n + k)
            assert np.abs(dN - np.transpose(dN, (0, 2, 1))).max() < 1e-10

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_horizontal_coefficients_symmetric(self, name):
        s = by_name(name)
        for p in s.sample(4, seed=13):
            assert cn.torsion_defect(s, p) < 1e-10

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_metricity_both_parts(self, name):
        s = by_name(name)
        for p in s.sample(4, seed=13):
            h, v = cn.metricity_defect(s, p)
            assert h < 1e-10
            assert v < 1e-10

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_deflection(self, name):
        s = by_name(name)
        for p in s.sample(4, seed=13):
            assert cn.deflection_defect(s, p) < 1e-10

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_projectors(self, name):
        s = by_name(name)
        for p in s.sample(4, seed=13):
            assert cn.projector_defects(s, p) < 1e-12


class TestHorizontalDerivative:
    def test_energy_is_horizontally_constant(self):
        s = sphere2()
        p = SPHERE_POINTS[3]
        dE = cn.horizontal_derivative(s, lambda x, y: 0.5 * s.L(x, y) ** 2, p)
        assert np.abs(dE).max() < 1e-12

    def test_positional_scalar_reduces_to_base_gradient(self):
        s = sphere2()
        p = SPHERE_POINTS[0]
        f = lambda x, y: x[0] ** 2 - 2.0 * x[1]
        df = cn.horizontal_derivative(s, f, p)
        assert df[0] == pytest.approx(2 * p.x[0], rel=1e-12)
        assert df[1] == pytest.approx(-2.0, rel=1e-12)

    def test_single_component_form(self):
        s = sphere2()
        p = SPHERE_POINTS[0]
        f = lambda x, y: x[0] * y[1]
        full = cn.horizontal_derivative(s, f, p)
        assert cn.horizontal_derivative(s, f, p, i=1) == pytest.approx(full[1])


class TestCovariantDerivative:
    def test_tautological_field_is_parallel(self):
        # nabla_h of eta vanishes: delta_j y^i = -N^i_j cancels F^i_kj y^k
        s = sphere2()
        for p in SPHERE_POINTS[:3]:
            A = cn.nabla_h(s, tautological_field(2), p)
            assert np.abs(A).max() < 1e-12

    def test_cartan_pair_shapes(self):
        s = by_name("minkowski_quartic2")
        p = s.sample(1, seed=40)[0]
        F, C = cn.cartan_coeffs(s, p)
        assert F.shape == (2, 2, 2)
        assert C.shape == (2, 2, 2)
        # vertical coefficients contract to zero against y on the last slot
        y = np.array(p.y)
        assert np.abs(np.einsum("ijk,k->ij", C, y)).max() < 1e-12

    def test_barthel_accessor_copies(self):
        s = sphere2()
        p = SPHERE_POINTS[4]
        N1 = cn.barthel(s, p)
        N1[0, 0] += 123.0
        assert cn.barthel(s, p)[0, 0] != N1[0, 0]
