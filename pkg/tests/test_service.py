import pytest

from torlog import serialize


CIRCLE = {
    "dims": [2, 2],
    "differentials": [[["-2/5", "-4/5"], ["4/5", "-2/5"]]],
}
INTERVAL = {"dims": [2, 1], "differentials": [[["-1", "1"]]]}
TWO_TERM = {"dims": [1, 1], "differentials": [[["2"]]]}


# ---------------------------------------------------------------------------
# envelope handling


def test_unknown_field_is_422(svc):
    status, body = svc.post("/check", {"complex": CIRCLE, "bogus": 1})
    assert status == 422


def test_domain_error_maps_to_400(svc):
    status, body = svc.post("/betti", {"complex": CIRCLE, "p": 9})
    assert status == 400
    assert body["error"]["kind"] == "domain"
    assert "9" in body["error"]["message"]


def test_malformed_complex_maps_to_400_with_where(svc):
    bad = {"dims": [1, 1, 1], "differentials": [[["1"]], [["1"]]]}
    status, body = svc.post("/betti", {"complex": bad})
    assert status == 400
    assert body["error"]["where"]["violations"][0]["kind"] == "ddzero"


def test_float_rejected_as_domain_error(svc):
    status, body = svc.post("/check", {"complex": {
        "dims": [1, 1], "differentials": [[[0.5]]]}})
    assert status == 400
    assert "float" in body["error"]["message"] or "exact" in body["error"]["message"]


# ---------------------------------------------------------------------------
# report endpoints


def test_check_reports_violations_not_an_error(svc):
    status, body = svc.post("/check", {"complex": {
        "dims": [1, 1, 1], "differentials": [[["1"]], [["1"]]]}})
    assert status == 200
    assert body["ok"] is False
    assert body["violations"][0]["kind"] == "ddzero"
    status, body = svc.post("/check", {"complex": CIRCLE})
    assert status == 200 and body["ok"] is True and body["violations"] == []


def test_betti_endpoint(svc):
    status, body = svc.post("/betti", {"complex": INTERVAL})
    assert status == 200
    assert body["betti"] == [1, 0]
    assert body["kernel_dims"] == [1]
    status, body = svc.post("/betti", {"complex": INTERVAL, "p": 0})
    assert body["betti_p"] == 1 and body["p"] == 0


def test_laplacian_endpoint(svc):
    status, body = svc.post("/laplacian", {"complex": CIRCLE, "p": 1})
    assert status == 200
    assert body["p"] == 1
    assert body["harmonic_dim"] == 0
    assert body["pseudo_det"] == "16/25"
    assert "adjoint" not in body  # top degree has no outgoing differential
    status, body = svc.post("/laplacian", {"complex": CIRCLE, "p": 0,
                                           "approx": True})
    assert "pseudo_det_approx" in body


def test_torsion_endpoint_circle(svc):
    status, body = svc.post("/torsion", {"complex": CIRCLE})
    assert status == 200
    assert body["character"] == [{"base": "5/4", "w": "1"}]
    assert body["beta"] == ["0", "1"]
    assert body["beta_invariant"] is True
    assert len(body["records"]) == 2
    signs = [r["sign"] for r in body["records"]]
    assert signs == [1, -1]


def test_torsion_endpoint_variation(svc):
    status, body = svc.post("/torsion", {"complex": CIRCLE,
                                         "variation_trials": 4, "seed": 9})
    assert status == 200
    assert len(body["variation"]["characters"]) == 4
    assert isinstance(body["variation"]["constant"], bool)
    assert body["variation"]["betti"] == [0, 0]


def test_torsion_on_zero_differential_is_trivial(svc):
    # pseudo-determinants of zero Laplacians are empty products
    status, body = svc.post("/torsion", {"complex": {
        "dims": [1, 1], "differentials": [[["0"]]]}})
    assert status == 200
    assert body["character"] == []


def test_reidemeister_rejects_nonacyclic(svc):
    status, body = svc.post("/reidemeister", {"complex": {
        "dims": [1, 1], "differentials": [[["0"]]]}})
    assert status == 400
    assert "betti" in body["error"]["message"]


def test_reidemeister_endpoint(svc):
    status, body = svc.post("/reidemeister", {"complex": CIRCLE})
    assert status == 200
    assert body["character"] == [{"base": "5/4", "w": "1"}]


def test_euler_endpoint(svc):
    status, body = svc.post("/euler", {"complex": CIRCLE, "a": "2", "b": "3"})
    assert status == 200
    assert body["chi"] == 0
    status, body = svc.post("/euler", {"complex": INTERVAL})
    assert body["chi"] == 1


def test_k1_requires_exactly_one_input(svc):
    status, body = svc.post("/k1-torsion", {})
    assert status == 400
    both = {"complex": TWO_TERM,
            "chain_map": {"source": TWO_TERM, "target": TWO_TERM,
                          "components": [[["1"]], [["1"]]]}}
    status, body = svc.post("/k1-torsion", both)
    assert status == 400


def test_k1_acyclic_complex(svc):
    status, body = svc.post("/k1-torsion", {"complex": TWO_TERM})
    assert status == 200
    assert body["kind"] == "acyclic"
    assert body["abs"] == "2"
    assert body["character"] == [{"base": "2", "w": "1"}]


def test_k1_chain_map(svc):
    point = {"dims": [1], "differentials": []}
    payload = {"chain_map": {"source": point, "target": point,
                             "components": [[["3"]]]}}
    status, body = svc.post("/k1-torsion", payload)
    assert status == 200
    assert body["kind"] == "equivalence"
    assert body["abs"] == "3"
    assert body["cone_dims"] == [1, 1]


def test_fred_index_endpoint(svc):
    status, body = svc.post("/fred-index", {"operator": {
        "z": [["1", "0", "0"], ["0", "1", "0"]]}})
    assert status == 200
    assert body["index"] == 1
    assert body["source_dim"] == 3 and body["target_dim"] == 2
    assert body["rank"] == 2
    assert body["parametrix"] == "computed"
    assert body["trace"] == "1"


def test_fred_index_with_given_parametrix(svc):
    status, body = svc.post("/fred-index", {"operator": {
        "z": [["2"]], "q": [["1/2"]]}})
    assert status == 200
    assert body["parametrix"] == "given" and body["index"] == 0


def test_fred_verify_mode_inference(svc):
    ident = [["1", "0"], ["0", "1"]]
    status, body = svc.post("/fred-verify", {"payload": {
        "z": [["1", "0"]], "q1": [["1"], ["0"]], "q2": [["0"], ["0"]]}})
    assert status == 200
    assert body["mode"] == "independence"
    assert body["ok"] is True
    assert body["difference_is_commutator_sum"] is True

    status, body = svc.post("/fred-verify", {"payload": {
        "zf": ident, "zg": [["1", "0"]]}, "mode": "additivity"})
    assert status == 200
    assert body["mode"] == "additivity"
    assert body["index_additive"] is True
    assert int(body["index"]["composite"]) == (int(body["index"]["first"])
                                               + int(body["index"]["second"]))


def test_verify_endpoint_suites(svc):
    status, body = svc.post("/verify", {"suite": "fredholm", "trials": 25,
                                        "seed": 3})
    assert status == 200
    assert body["suite"] == "fredholm" and body["ok"] is True
    assert body["trials"] == 25

    status, body = svc.post("/verify", {"suite": "nerve", "trials": 20})
    assert status == 200
    assert body["suite"] == "nerve"
    assert len(body["reports"]) == 3
    assert body["ok"] is True


def test_verify_rejects_bad_suite(svc):
    status, body = svc.post("/verify", {"suite": "nope"})
    assert status == 422


def test_glue_sum(svc):
    status, body = svc.post("/glue-compose", {"mode": "sum", "first": CIRCLE,
                                              "second": INTERVAL})
    assert status == 200
    assert body["additive"] is True
    assert body["sum"]["dims"] == [4, 3]


def test_glue_compose_open(svc):
    six = {"dims": [1, 1], "differentials": [[["6"]]]}
    f = {"source": TWO_TERM, "target": six, "components": [[["1"]], [["3"]]]}
    g = {"source": six, "target": TWO_TERM, "components": [[["1"]], [["1/3"]]]}
    status, body = svc.post("/glue-compose", {"mode": "compose", "first": f,
                                              "second": g})
    assert status == 200
    assert body["closed"] is False
    assert body["additive"] is True
    assert body["character_first"] == [{"base": "1/3", "w": "1"}]
    assert body["character_second"] == [{"base": "3", "w": "1"}]
    assert body["character_composite"] == []


def test_glue_compose_closed_telescopes_to_unit(svc):
    unit = {"dims": [0, 0], "differentials": [[]]}
    into = {"source": unit, "target": TWO_TERM, "components": [[[]], [[]]]}
    outof = {"source": TWO_TERM, "target": unit, "components": [[], []]}
    status, body = svc.post("/glue-compose", {"mode": "compose", "first": into,
                                              "second": outof, "base": 2})
    assert status == 200
    assert body["closed"] is True
    assert body["additive"] is True
    # the per-morphism character is a difference of endpoint torsions, so a
    # declared closed factorization always telescopes to the trivial class
    assert body["character_composite"] == []
    assert body["export"]["value"] == "1"


def test_responses_have_no_floats(svc):
    status, body = svc.post("/torsion", {"complex": CIRCLE, "approx": True})
    assert status == 200

    def walk(x):
        assert not isinstance(x, float)
        if isinstance(x, dict):
            for k, v in x.items():
                if k.endswith("approx"):
                    assert isinstance(v, str)
                else:
                    walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(body)
    serialize.dumps(body)  # canonical encoder accepts every payload we emit
