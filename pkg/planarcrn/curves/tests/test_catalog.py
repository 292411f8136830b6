import math
from fractions import Fraction
from unittest import TestCase

import numpy as np
from pyexpect import expect

from planarcrn.curves import (
    CRUNODE_MU,
    axis_intersections,
    catalog,
    catalog_summary,
    diagonal_roots,
    extract_ovals,
    harnack_bound,
    hi_x_range,
    oval_count_for_mu,
    parse_param_text,
    q_curve,
)
from planarcrn.curves.ovals import Window
from planarcrn.exceptions import BadParams, NonpositiveDelta, UnknownCurve
from planarcrn.polynomial import Poly2


MU_VALUES = (-100, -32, -28, 0, 20, 32, 39, 100)
OVAL_COUNTS = (1, 1, 2, 2, 2, 2, 4, 4)


class QuarticFamilyTest(TestCase):
    def test_oval_count_for_mu(self) -> None:
        for mu, count in zip(MU_VALUES, OVAL_COUNTS):
            expect(oval_count_for_mu(mu)).to_equal(count)
        expect(oval_count_for_mu(CRUNODE_MU)).to_be_none()
        expect(oval_count_for_mu(Fraction(-64, 2))).to_equal(1)

    def test_extracted_counts_match_closed_form(self) -> None:
        for mu, count in zip(MU_VALUES, OVAL_COUNTS):
            spec = catalog("q", {"mu": Fraction(mu)})
            expect(spec.expected_ovals).to_equal(count)
            expect(extract_ovals(spec, 512).count).to_equal(count)

    def test_counts_survive_doubled_resolution(self) -> None:
        for mu, count in zip(MU_VALUES, OVAL_COUNTS):
            spec = catalog("q", {"mu": Fraction(mu)})
            expect(extract_ovals(spec, 1024).count).to_equal(count)

    def test_nearest_oval_is_stable_under_refinement(self) -> None:
        for mu in (-100, 0, 39):
            spec = catalog("q", {"mu": Fraction(mu)})
            coarse = extract_ovals(spec, 512)
            fine = extract_ovals(spec, 1024)
            matched = []
            for index, oval in enumerate(coarse.ovals):
                targets = set()
                for x, y in oval[:: max(1, len(oval) // 16)]:
                    expect(coarse.nearest_oval((x, y))[0]).to_equal(index)
                    targets.add(fine.nearest_oval((x, y))[0])
                expect(len(targets)).to_equal(1)
                matched.append(targets.pop())
            expect(sorted(matched)).to_equal(list(range(fine.count)))

    def test_axis_intersections_do_not_depend_on_mu(self) -> None:
        for mu in MU_VALUES:
            spec = catalog("q", {"mu": Fraction(mu)})
            points = axis_intersections(spec)
            expect(len(points)).to_equal(8)
            for x, y in points:
                expect(spec.poly.eval(x, y)).to_equal(0)

    def test_shifted_axis_intersections(self) -> None:
        spec = catalog("q_shifted", {"mu": Fraction(39)})
        points = axis_intersections(spec)
        expect((Fraction(3), Fraction(2)) in points).is_true()
        expect((Fraction(2), Fraction(5, 4)) in points).is_true()
        for x, y in points:
            expect(spec.poly.eval(x, y)).to_equal(0)

    def test_mu_32_gives_concentric_circles(self) -> None:
        expect(q_curve(32)).to_equal(
            Poly2.parse("x^2 + y^2 - 1") * Poly2.parse("16 x^2 + 16 y^2 - 9")
        )
        ovals = extract_ovals(catalog("q", {"mu": Fraction(32)}), 512)
        inner, outer = ovals.order_by_area()
        for index, radius in ((inner, 0.75), (outer, 1.0)):
            radii = np.linalg.norm(ovals.ovals[index], axis=1)
            expect(float(np.min(radii))).close_to(radius, max_delta=1e-2)
            expect(float(np.max(radii))).close_to(radius, max_delta=1e-2)
        expect(ovals.nesting_depths()[inner]).to_equal(1)
        expect(ovals.nesting_depths()[outer]).to_equal(0)

    def test_diagonal_roots(self) -> None:
        for mu in (-28, 0, 20, 32):
            spec = catalog("q", {"mu": Fraction(mu)})
            roots = diagonal_roots(spec)
            expect(len(roots)).to_equal(4)
            expect(roots).to_equal(sorted(roots))
            for root in roots:
                expect(spec.poly.eval_f64(root, root)).close_to(0, max_delta=1e-9)
        expect(len(diagonal_roots(catalog("q", {"mu": Fraction(-32)})))).to_equal(2)
        expect(diagonal_roots(catalog("q", {"mu": Fraction(39)}))).to_equal([])

    def test_family_helpers_reject_other_curves(self) -> None:
        with self.assertRaises(BadParams):
            axis_intersections(catalog("cubic"))
        with self.assertRaises(BadParams):
            diagonal_roots(catalog("ellipse"))

    def test_window_grows_as_outer_oval_stretches(self) -> None:
        window = catalog("q", {"mu": Fraction(-28)}).window
        expect(window.x_max > 3.5).is_true()
        expect(catalog("q", {"mu": Fraction(0)}).window.x_max).to_equal(1.5)


class CatalogTest(TestCase):
    def test_every_entry_builds(self) -> None:
        defaults = {
            "h_i": {"delta": Fraction(1)},
            "product": {"deltas": (Fraction(1), Fraction(2))},
            "q": {"mu": Fraction(0)},
            "q_shifted": {"mu": Fraction(0)},
        }
        for name in catalog_summary():
            spec = catalog(name, defaults.get(name, {}))
            expect(spec.name).to_equal(name)
            expect(spec.poly.is_zero()).is_false()

    def test_catalog_counts(self) -> None:
        cases = [
            ("ellipse", {}, 1),
            ("cubic", {}, 1),
            ("h9", {}, 1),
            ("h_i", {"delta": Fraction(1)}, 1),
            ("product", {"deltas": (Fraction(1), Fraction(2), Fraction(3))}, 3),
            ("q_shifted", {"mu": Fraction(39)}, 4),
            ("threeoval", {}, 3),
        ]
        for name, params, count in cases:
            spec = catalog(name, params)
            expect(spec.expected_ovals).to_equal(count)
            expect(extract_ovals(spec, 512).count).to_equal(count)

    def test_unknown_curve(self) -> None:
        with self.assertRaises(UnknownCurve):
            catalog("lemniscate")

    def test_parameter_validation(self) -> None:
        with self.assertRaises(BadParams):
            catalog("q")
        with self.assertRaises(BadParams):
            catalog("ellipse", {"mu": Fraction(1)})
        with self.assertRaises(BadParams):
            catalog("q", {"mu": (Fraction(1), Fraction(2))})
        with self.assertRaises(NonpositiveDelta):
            catalog("h_i", {"delta": Fraction(0)})

    def test_describe_params(self) -> None:
        spec = catalog("product", {"deltas": (Fraction(1), Fraction(1, 2))})
        expect(spec.describe_params()).to_equal("deltas=1,1/2")
        with self.assertRaises(BadParams):
            spec.rational_param("deltas")
        with self.assertRaises(BadParams):
            spec.param("mu")

    def test_parse_param_text(self) -> None:
        expect(parse_param_text("mu", "39")).to_equal(Fraction(39))
        expect(parse_param_text("eps", "-1/10")).to_equal(Fraction(-1, 10))
        expect(parse_param_text("deltas", "1, 2,3")).to_equal(
            (Fraction(1), Fraction(2), Fraction(3))
        )
        with self.assertRaises(BadParams):
            parse_param_text("mu", "0.5")
        with self.assertRaises(BadParams):
            parse_param_text("mu", "")

    def test_custom_window(self) -> None:
        spec = catalog("cubic")
        smaller = catalog("cubic", window=Window(0.5, 3.0, 0.5, 3.0))
        expect(smaller.window.x_min).to_equal(0.5)
        expect(smaller.poly).to_equal(spec.poly)


class ClosedFormTest(TestCase):
    def test_harnack_bound(self) -> None:
        expect(harnack_bound(2)).to_equal(1)
        expect(harnack_bound(3)).to_equal(2)
        expect(harnack_bound(4)).to_equal(4)
        expect(harnack_bound(8)).to_equal(22)

    def test_hi_x_range(self) -> None:
        low, high = hi_x_range(1)
        expect(low).close_to((7 - math.sqrt(13)) / 6, max_delta=1e-12)
        expect(high).close_to((7 + math.sqrt(13)) / 6, max_delta=1e-12)
        with self.assertRaises(NonpositiveDelta):
            hi_x_range(0)

    def test_hi_x_range_is_where_the_curve_turns(self) -> None:
        for delta in (Fraction(1), Fraction(3), Fraction(1, 2)):
            spec = catalog("h_i", {"delta": delta})
            for x in hi_x_range(delta):
                # h is a quadratic in y whose roots merge at the extremes
                a = x * x + x + 1
                b = x * x - (8 + float(delta)) * x + 1
                expect(b * b - 4 * a * a).close_to(0, max_delta=1e-9)
            oval = extract_ovals(spec, 512).ovals[0]
            low, high = hi_x_range(delta)
            expect(float(np.min(oval[:, 0]))).close_to(low, max_delta=1e-2)
            expect(float(np.max(oval[:, 0]))).close_to(high, max_delta=1e-2)
