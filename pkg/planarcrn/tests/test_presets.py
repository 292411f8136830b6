from fractions import Fraction
from unittest import TestCase

from pyexpect import expect

from planarcrn.construct import check_invariant_curve
from planarcrn.exceptions import BadParams, UnknownPreset
from planarcrn.network import derive_mass_action, is_weakly_reversible
from planarcrn.polynomial import Poly2
from planarcrn.presets import (
    NETWORK_PRESETS,
    SYSTEM_PRESETS,
    figure_names,
    figure_preset,
    network_preset,
    parse_figure_preset,
    system_preset,
    system_preset_curve,
)


class NetworkPresetTest(TestCase):
    def test_every_network_parses(self) -> None:
        for name in NETWORK_PRESETS:
            expect(len(network_preset(name)) > 0).is_true()

    def test_unit_square_is_weakly_reversible(self) -> None:
        expect(is_weakly_reversible(network_preset("unit_square"))).is_true()
        expect(is_weakly_reversible(network_preset("lotka_volterra"))).is_false()

    def test_linear_times_matches_its_system(self) -> None:
        expect(derive_mass_action(network_preset("linear_times"))).to_equal(
            system_preset("linear_times")
        )

    def test_unknown_network(self) -> None:
        with self.assertRaises(UnknownPreset):
            network_preset("brusselator")


class SystemPresetTest(TestCase):
    def test_every_system_builds(self) -> None:
        for name in SYSTEM_PRESETS:
            system = system_preset(name)
            expect(system.f.is_zero() and system.g.is_zero()).is_false()

    def test_curves_are_invariant(self) -> None:
        for name in SYSTEM_PRESETS:
            spec = system_preset_curve(name)
            if spec is None:
                continue
            result = check_invariant_curve(spec.poly, system_preset(name))
            expect(result.is_invariant).is_true()

    def test_lotka_volterra_rates(self) -> None:
        system = system_preset(
            "lotka_volterra", {"k1": Fraction(2), "k2": Fraction(1, 2)}
        )
        expect(system.f).to_equal(Poly2.parse("2 x - 1/2 x y"))
        expect(system.g).to_equal(Poly2.parse("1/2 x y - y"))

    def test_parameters_reach_the_curve(self) -> None:
        spec = system_preset_curve("gradient_quartic", {"mu": Fraction(0)})
        assert spec is not None
        expect(spec.rational_param("mu")).to_equal(Fraction(0))
        expect(spec.expected_ovals).to_equal(2)

    def test_parameter_validation(self) -> None:
        with self.assertRaises(UnknownPreset):
            system_preset("van_der_pol")
        with self.assertRaises(BadParams):
            system_preset("escher", {"eps": Fraction(1)})
        with self.assertRaises(BadParams):
            system_preset("boros", {"eps": (Fraction(1), Fraction(2))})


class FigurePresetTest(TestCase):
    def test_figure_names(self) -> None:
        expect(figure_names()).to_equal(
            ["fig2a", "fig5a", "fig5b", "fig6", "fig8a", "fig8b"]
        )

    def test_start_counts(self) -> None:
        expect(len(figure_preset("fig5a").start_points())).to_equal(18)
        expect(len(figure_preset("fig5b").start_points())).to_equal(18)
        expect(len(figure_preset("fig6").start_points())).to_equal(4)
        expect(len(figure_preset("fig8a").start_points())).to_equal(20)
        expect(len(figure_preset("fig8b").start_points())).to_equal(20)
        expect(figure_preset("fig2a").start_points()).to_equal([])

    def test_quartic_grid(self) -> None:
        starts = figure_preset("fig8b").start_points()
        xs = sorted({x for x, _ in starts})
        ys = sorted({y for _, y in starts})
        expect(xs).to_equal([0.5, 1.5, 2.5, 3.5, 4.5])
        expect(len(ys)).to_equal(4)
        expect(ys[0]).to_equal(0.5)
        expect(ys[-1]).to_equal(4.5)

    def test_nested_ovals_corners(self) -> None:
        expect(figure_preset("fig6").start_points()).to_equal(
            [(0.0, 0.0), (3.5, 0.0), (3.5, 3.5), (0.0, 3.5)]
        )

    def test_figure_contents(self) -> None:
        curve_of_equilibria = figure_preset("fig5a")
        expect(dict(curve_of_equilibria.sim)).to_equal({"converge_tol": 1e-10})
        expect(dict(curve_of_equilibria.system_params)).to_equal({"eps": Fraction(0)})
        curve_only = figure_preset("fig2a")
        expect(curve_only.build_system()).to_be_none()
        expect(curve_only.line).to_equal(Poly2.parse("y - 7 x"))
        expect(curve_only.log_scale).is_true()
        nested = figure_preset("fig6")
        expect(nested.shade).is_true()
        expect(nested.curve_spec().window.bounds).to_equal((0.0, 3.5, 0.0, 3.5))
        expect(nested.curve_spec().expected_ovals).to_equal(4)

    def test_unknown_figure(self) -> None:
        with self.assertRaises(UnknownPreset):
            figure_preset("spiral")

    def test_malformed_figures(self) -> None:
        with self.assertRaises(BadParams):
            parse_figure_preset("broken", {"description": "no curve"})
        with self.assertRaises(BadParams):
            parse_figure_preset(
                "broken", {"curve": {"name": "cubic"}, "plot": {"window": [0, 1]}}
            )
        with self.assertRaises(BadParams):
            parse_figure_preset(
                "broken", {"curve": {"name": "cubic"}, "starts": [{"kind": "spiral"}]}
            )
