from fractions import Fraction
from unittest import TestCase

from pyexpect import expect

from planarcrn.construct import check_invariant_curve
from planarcrn.curves import q_curve
from planarcrn.curves.ovals import Window
from planarcrn.exceptions import BadParams, RecipeError
from planarcrn.polynomial import Poly2
from planarcrn.presets import system_preset
from planarcrn.recipe import Builder, Recipe, build_from_recipe, recipe_params


class RecipeTest(TestCase):
    def test_gradient_recipe_matches_preset(self) -> None:
        recipe = Recipe(
            builder=Builder.GRADIENT,
            eps=Fraction(1),
            curve="q",
            params=recipe_params({"mu": Fraction(39)}),
            shift=(Fraction(2), Fraction(2)),
        )
        expect(build_from_recipe(recipe)).to_equal(
            system_preset("gradient_quartic", {"mu": Fraction(39)})
        )

    def test_general_recipe_with_named_pair(self) -> None:
        recipe = Recipe(
            builder=Builder.GENERAL, eps=Fraction(1), curve="cubic", pair="linear"
        )
        expect(build_from_recipe(recipe)).to_equal(system_preset("boros"))

    def test_christopher_recipe(self) -> None:
        recipe = Recipe(
            builder=Builder.CHRISTOPHER,
            curve="threeoval",
            line=Poly2.parse("y - 7 x"),
        )
        expect(build_from_recipe(recipe)).to_equal(system_preset("christopher"))

    def test_multiplier_keeps_the_curve_invariant(self) -> None:
        h = Poly2.parse("x^2 + y^2 - 4 x - 4 y + 7")
        plain = build_from_recipe(Recipe(builder=Builder.GRADIENT, h=h))
        multiplied = build_from_recipe(
            Recipe(builder=Builder.GRADIENT, h=h, multiplier=Poly2.parse("1 + x y"))
        )
        expect(multiplied.f).to_equal(plain.f * Poly2.parse("1 + x y"))
        expect(multiplied.g).to_equal(plain.g * Poly2.parse("1 + x y"))
        expect(check_invariant_curve(h, multiplied).is_invariant).is_true()

    def test_shift_moves_curve_and_window(self) -> None:
        recipe = Recipe(
            builder=Builder.GRADIENT,
            curve="q",
            params=(("mu", Fraction(0)),),
            shift=(Fraction(2), Fraction(3)),
        )
        spec = recipe.curve_spec()
        expect(spec.poly).to_equal(q_curve(0).shift(2, 3))
        expect(spec.window.bounds).to_equal((0.5, 3.5, 1.5, 4.5))
        expect(spec.rational_param("dy")).to_equal(Fraction(3))

    def test_explicit_window_wins(self) -> None:
        window = Window(0.0, 2.0, 0.0, 2.0)
        recipe = Recipe(builder=Builder.GRADIENT, curve="cubic", window=window)
        expect(recipe.curve_spec().window).to_equal(window)

    def test_custom_curve_uses_shifted_window(self) -> None:
        recipe = Recipe(builder=Builder.GRADIENT, h=Poly2.parse("x y - 1"))
        expect(recipe.curve_spec().name).to_equal("custom")
        expect(recipe.curve_spec().window.bounds).to_equal((0.3, 4.0, 0.3, 4.0))

    def test_transversal_pair(self) -> None:
        f0, g0 = Poly2.parse("1"), Poly2.parse("x")
        recipe = Recipe(builder=Builder.GENERAL, curve="cubic", f0=f0, g0=g0)
        expect(recipe.transversal_pair()).to_equal((f0, g0))

    def test_validation(self) -> None:
        with self.assertRaises(RecipeError):
            Recipe(builder=Builder.GRADIENT)
        with self.assertRaises(RecipeError):
            Recipe(builder=Builder.GENERAL, curve="cubic", g0=Poly2.parse("1"))
        with self.assertRaises(RecipeError):
            Recipe(
                builder=Builder.CHRISTOPHER,
                curve="cubic",
                line=Poly2.parse("x"),
                pair="linear",
            )

    def test_bad_curve_parameters_surface_on_build(self) -> None:
        recipe = Recipe(
            builder=Builder.GRADIENT, curve="q", params=(("nu", Fraction(1)),)
        )
        with self.assertRaises(BadParams):
            build_from_recipe(recipe)
