import math
import pathlib
from unittest import TestCase

from pyexpect import expect

from planarcrn import config
from planarcrn.file_formats.network import parse_network
from planarcrn.network import derive_mass_action
from planarcrn.polynomial import Poly2
from planarcrn.presets import system_preset
from planarcrn.server.app import app


FIXTURES: pathlib.Path = (
    pathlib.Path(__file__).parent.parent.parent.absolute() / "file_formats" / "tests"
)

ESCHER = {"f": "2 x^2 - x y + 3/2", "g": "5/2 x^2 - x y - y + 17/4"}
CROSS = {"f": "1 - y", "g": "x"}


class ApiTest(TestCase):
    def setUp(self) -> None:
        config.set_config_path(None)
        with open(FIXTURES / "lotka_volterra.crn") as file:
            self.lotka_volterra = file.read()
        with open(FIXTURES / "gradient_q39.recipe") as file:
            self.recipe_text = file.read()
        self.client = app.test_client()

    def test_derive(self) -> None:
        response = self.client.post(
            "/api/derive", json={"network": self.lotka_volterra}
        )
        expect(response.status_code).to_equal(200)
        body = response.get_json()
        expect(Poly2.parse(body["f"])).to_equal(Poly2.parse("x - x y"))
        expect(Poly2.parse(body["g"])).to_equal(Poly2.parse("x y - y"))
        expect(body["order"]).to_equal(2)
        expect(body["molecularity"]).to_equal(2)
        expect(body["weakly_reversible"]).is_false()

    def test_check(self) -> None:
        response = self.client.post("/api/check", json=ESCHER)
        expect(response.status_code).to_equal(200)
        body = response.get_json()
        expect(body["degree"]).to_equal("2")
        expect(body["S_2"]).to_equal("true")
        expect(body["passed"]).is_true()

        response = self.client.post("/api/check", json=CROSS)
        body = response.get_json()
        expect(body["passed"]).is_false()
        expect(body["violations"]).to_equal("a[0,1]=-1")

    def test_realize(self) -> None:
        lotka_volterra = system_preset("lotka_volterra")
        response = self.client.post(
            "/api/realize",
            json={"f": str(lotka_volterra.f), "g": str(lotka_volterra.g)},
        )
        expect(response.status_code).to_equal(200)
        network = parse_network(response.get_json()["network"])
        expect(derive_mass_action(network)).to_equal(lotka_volterra)

    def test_construct(self) -> None:
        response = self.client.post("/api/construct", json={"recipe": self.recipe_text})
        expect(response.status_code).to_equal(200)
        from_text = response.get_json()
        expect(from_text["cofactor"] is not None).is_true()

        response = self.client.post(
            "/api/construct",
            json={
                "recipe": {
                    "curve": "q",
                    "shift": ["2", "2"],
                    "builder": "gradient",
                    "eps": "1",
                    "params": {"mu": "39"},
                }
            },
        )
        expect(response.status_code).to_equal(200)
        expect(response.get_json()).to_equal(from_text)

    def test_ovals(self) -> None:
        response = self.client.get("/api/ovals?curve=q&mu=32&resolution=128")
        expect(response.status_code).to_equal(200)
        body = response.get_json()
        expect(body["count"]).to_equal(2)
        expect(len(body["ovals"])).to_equal(2)
        expect(body["open_components"]).to_equal(0)
        expect(body["degenerate"]).is_false()
        expect(sorted(body["areas"])[0]).close_to(9 * math.pi / 16, max_delta=2e-2)

    def test_catalog(self) -> None:
        response = self.client.get("/api/catalog")
        curves = {
            entry["name"]: entry["params"] for entry in response.get_json()["curves"]
        }
        expect(curves["q"]).to_equal(["mu"])
        expect(curves["cubic"]).to_equal([])

    def test_bad_input_is_a_client_error(self) -> None:
        response = self.client.post("/api/check", json={**ESCHER, "class": "z"})
        expect(response.status_code).to_equal(400)
        expect(response.get_json()["title"]).to_equal("Bad Parameters")

        response = self.client.post("/api/check", json={"f": "x +", "g": "y"})
        expect(response.status_code).to_equal(400)
        expect(response.get_json()["title"]).to_equal("Polynomial Syntax Error")

        response = self.client.post("/api/derive", data="not json")
        expect(response.status_code).to_equal(400)

        response = self.client.get("/api/ovals")
        expect(response.status_code).to_equal(400)

        response = self.client.post("/api/construct", json={"recipe": 3})
        expect(response.status_code).to_equal(400)

    def test_computation_failure_is_a_server_error(self) -> None:
        response = self.client.post("/api/realize", json=CROSS)
        expect(response.status_code).to_equal(500)
        body = response.get_json()
        expect(body["title"]).to_equal("Not In Class")
        expect("Traceback" in body["traceback"]).is_true()
