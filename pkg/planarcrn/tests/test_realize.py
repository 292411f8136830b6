from fractions import Fraction
from unittest import TestCase

from hypothesis import given, settings, strategies as st
from pyexpect import expect

from planarcrn.exceptions import BadParams, EmptyRealization, NotInClass
from planarcrn.file_formats.network import parse_network, print_network
from planarcrn.network import (
    Network,
    PlanarSystem,
    derive_mass_action,
    lotka_volterra_network,
    molecularity,
)
from planarcrn.polynomial import Poly2
from planarcrn.presets import ESCHER_F, ESCHER_G
from planarcrn.realize import is_M_n, is_S_n, realize_M_n, realize_S_n
from planarcrn.tests.strategies import m_n_systems, networks, s_n_systems


class ClassMembershipTest(TestCase):
    def test_escher_system_is_in_s2(self) -> None:
        report = is_S_n(PlanarSystem(ESCHER_F, ESCHER_G), 2)
        expect(report.passed).is_true()
        expect(report.in_S_n).to_equal({2: True})
        expect(report.violating_coefficients).to_equal(())

    def test_negative_constant_is_reported(self) -> None:
        report = is_S_n(PlanarSystem(Poly2.constant(-1), Poly2.zero()), 1)
        expect(report.passed).is_false()
        expect(report.violating_coefficients).to_equal((("a", 0, 0, Fraction(-1)),))
        expect(report.to_kv()["violations"]).to_equal("a[0,0]=-1")

    def test_degree_above_n_violates(self) -> None:
        report = is_S_n(PlanarSystem(Poly2.parse("x^3"), Poly2.zero()), 2)
        expect(report.passed).is_false()
        expect(report.violating_coefficients).to_equal((("a", 3, 0, Fraction(1)),))

    def test_lotka_volterra_is_in_m2(self) -> None:
        system = derive_mass_action(lotka_volterra_network())
        report = is_M_n(system, 2)
        expect(report.passed).is_true()
        expect(report.in_M_n).to_equal({2: True})

    def test_top_degree_condition(self) -> None:
        # x y appears with a + b = 2 > 0 at top degree
        system = PlanarSystem(Poly2.parse("x y"), Poly2.parse("x y"))
        expect(is_S_n(system, 2).passed).is_true()
        report = is_M_n(system, 2)
        expect(report.passed).is_false()
        expect(report.in_S_n).to_equal({2: True})
        expect(report.violating_coefficients).to_equal((("a+b", 1, 1, Fraction(2)),))

    def test_merged_report(self) -> None:
        system = PlanarSystem(Poly2.parse("x y"), Poly2.parse("x y"))
        report = is_S_n(system, 2).merge(is_M_n(system, 2))
        expect(report.passed).is_false()
        expect(report.to_text()).to_equal(
            "degree: 2\nS_2: yes\nM_2: no\nviolating coefficients:\n"
            "  a+b[1,1] = 2\n"
        )

    def test_class_index_must_be_positive(self) -> None:
        with self.assertRaises(BadParams):
            is_S_n(PlanarSystem(Poly2.x(), Poly2.y()), 0)

    @given(s_n_systems())
    @settings(max_examples=200)
    def test_s_n_sits_inside_m_of_one_more(self, system: PlanarSystem) -> None:
        n = max(system.degree, 1)
        expect(is_S_n(system, n).passed).is_true()
        expect(is_M_n(system, n + 1).passed).is_true()

    @given(networks())
    @settings(max_examples=200)
    def test_derived_systems_meet_the_conditions(self, network: Network) -> None:
        system = derive_mass_action(network)
        order = max(1, max(r.alpha + r.beta for r in network))
        expect(is_S_n(system, order).passed).is_true()
        expect(is_M_n(system, max(1, molecularity(network))).passed).is_true()


class RealizationTest(TestCase):
    def test_realize_escher(self) -> None:
        system = PlanarSystem(ESCHER_F, ESCHER_G)
        network = realize_S_n(system)
        expect(derive_mass_action(network)).to_equal(system)

    def test_not_in_class(self) -> None:
        system = PlanarSystem(Poly2.constant(-1), Poly2.zero())
        with self.assertRaises(NotInClass) as context:
            realize_S_n(system)
        expect(context.exception.exit_code).to_equal(1)
        expect(context.exception.report.passed).is_false()

    def test_zero_system(self) -> None:
        with self.assertRaises(EmptyRealization):
            realize_S_n(PlanarSystem(Poly2.zero(), Poly2.zero()))
        with self.assertRaises(EmptyRealization):
            realize_M_n(PlanarSystem(Poly2.zero(), Poly2.zero()), 2)

    def test_lotka_volterra_m2_realization(self) -> None:
        system = derive_mass_action(lotka_volterra_network())
        network = realize_M_n(system, 2)
        expect(derive_mass_action(network)).to_equal(system)
        expect(molecularity(network)).to_equal(2)

    def test_pure_top_degree_terms(self) -> None:
        # y^2 and x^2 are the two mirrored corner cases
        system = PlanarSystem(Poly2.parse("y^2 - 3 x^2"), Poly2.parse("-2 y^2 + x^2"))
        network = realize_M_n(system, 2)
        expect(derive_mass_action(network)).to_equal(system)
        expect(molecularity(network) <= 2).is_true()

    def test_untouched_species_still_takes_part(self) -> None:
        system = PlanarSystem(Poly2.parse("1 - x"), Poly2.zero())
        network = realize_S_n(system)
        network.check_species()
        reread = parse_network(print_network(network))
        expect(derive_mass_action(reread)).to_equal(system)

        system = PlanarSystem(Poly2.zero(), Poly2.parse("2 - y^2"))
        network = realize_M_n(system, 2)
        reread = parse_network(print_network(network))
        expect(derive_mass_action(reread)).to_equal(system)
        expect(molecularity(network)).to_equal(2)

    @given(s_n_systems())
    @settings(max_examples=200)
    def test_s_n_roundtrip(self, system: PlanarSystem) -> None:
        network = realize_S_n(system)
        expect(derive_mass_action(network)).to_equal(system)
        expect(parse_network(print_network(network))).to_equal(network.normalized())

    @given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), m_n_systems(n))))
    @settings(max_examples=200)
    def test_m_n_roundtrip(self, case: tuple) -> None:  # pyre-ignore[24]
        n, system = case
        network = realize_M_n(system, n)
        expect(derive_mass_action(network)).to_equal(system)
        # the pair keeping an untouched species in the network is bimolecular
        expect(molecularity(network) <= max(n, 2)).is_true()
        if n > 1 or not (system.f.is_zero() or system.g.is_zero()):
            expect(molecularity(network) <= n).is_true()
