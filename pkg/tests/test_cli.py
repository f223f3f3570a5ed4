import json

import pytest
from click.testing import CliRunner

from qskat.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_toy_stage_initial(runner, tmp_path):
    out = tmp_path / "toy.json"
    result = runner.invoke(
        main, ["toy", "--stage", "initial", "--shots", "1000", "--seed", "3",
               "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["support"] == 6
    assert len(report["counts"]) == 6
    assert sum(report["counts"].values()) == 1000
    assert all(report["checks"].values())
    assert (tmp_path / "toy.png").exists()


def test_toy_stage_b_played_probabilities(runner):
    result = runner.invoke(main, ["toy", "--stage", "b-played"])
    assert result.exit_code == 0
    report = json.loads(result.output.splitlines()[-1])
    assert report["support"] == 24
    amps = list(report["amplitudes"].values())
    assert all(abs(a - (1 / 24) ** 0.5) < 1e-9 for a in amps)


def test_toy_final_histogram_shape(runner):
    result = runner.invoke(main, ["toy", "--stage", "final", "--shots", "12000"])
    assert result.exit_code == 0
    report = json.loads(result.output.splitlines()[-1])
    counts = sorted(report["counts"].values())
    assert len(counts) == 8
    # two outcomes near 3000, six near 1000 (4 sigma bands)
    assert all(abs(c - 1000) < 4 * 30.4 or abs(c - 3000) < 4 * 47.4 for c in counts)


def test_toy_csv_format(runner, tmp_path):
    out = tmp_path / "toy.csv"
    result = runner.invoke(
        main, ["toy", "--stage", "initial", "--format", "csv", "--out", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "label,count"
    assert len(lines) == 7


def test_deals_reports_golden_numbers(runner):
    result = runner.invoke(main, ["deals"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["full_deal_count"] == 2753294408504640
    assert report["known_hand_count"] == 42678636
    assert report["toy_count"] == 6
    by_cards = {r["cards"]: r["deals"] for r in report["reduced_games"]}
    assert by_cards[5] == 102918816
    assert by_cards[10] == 2753294408504640


def test_deals_spec_file(runner, tmp_path):
    spec = {
        "deck": ["CA", "C10", "CK", "CQ"],
        "players": 2,
        "hand_size": 2,
        "skat_size": 0,
        "game": {"variant": "suit", "trump": "S"},
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    result = runner.invoke(main, ["deals", str(path)])
    assert result.exit_code == 0
    assert json.loads(result.output)["count"] == 6


def test_deals_spec_accepts_card_objects(runner, tmp_path):
    spec = {
        "deck": [{"suit": "C", "rank": "A"}, {"suit": "C", "rank": "10"},
                 {"suit": "C", "rank": "K"}, {"suit": "C", "rank": "Q"}],
        "players": 2,
        "hand_size": 2,
        "skat_size": 0,
        "game": {"variant": "suit", "trump": "S"},
        "constraints": [{"card": {"suit": "C", "rank": "A"}, "holder": 0}],
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    result = runner.invoke(main, ["deals", str(path)])
    assert result.exit_code == 0
    assert json.loads(result.output)["count"] == 3


def test_showcase_command(runner):
    result = runner.invoke(main, ["showcase"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    by_card = {q["card"]: q["q_bar"] for q in report["qualities"]}
    assert by_card == {"H10": 6, "HQ": 11, "H7": 9}
    assert report["recommended"] == "HQ"
    assert len(report["unbeatable_deals"]) == 1
    assert set(report["unbeatable_deals"][0]["declarer"]) == {"CJ", "SJ", "HA"}


def test_showcase_pretty_renders_aligned_table(runner):
    result = runner.invoke(main, ["showcase", "--pretty"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0].split() == ["card", "q_bar", "deals_total", "p_win"]
    assert set(lines[1]) <= {"-", " "}
    assert any(row.startswith("HQ") and "11" in row for row in lines[2:])


def test_showcase_hybrid_mode_reports_quantum_run(runner):
    result = runner.invoke(main, ["showcase", "--mode", "hybrid"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["mode"] == "hybrid"
    quantum = report["quantum"]
    assert quantum["initial_support"] == 12
    assert quantum["norm"] == pytest.approx(1.0, abs=1e-9)
    assert quantum["points_conserved"] is True
    assert report["script"][0] == {"op": "fixed", "player": 0, "card": "HQ"}
    assert report["script"][-1] == {"op": "tt", "k": 3}


def test_qcount_command(runner):
    result = runner.invoke(main, ["qcount", "--t", "7"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["true_count"] == 6
    assert abs(report["estimate"] - 6) <= 0.5


def test_payoff_csv_and_figure(runner, tmp_path):
    out = tmp_path / "payoff.csv"
    result = runner.invoke(main, ["payoff", "--out", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "p,choice,payoff"
    assert len(lines) == 1 + 101 * 5
    assert (tmp_path / "payoff.png").exists()
    # p=0 rows are negative for every choice
    for line in lines[1:6]:
        assert float(line.split(",")[2]) < 0


def test_payoff_sf_flag(runner):
    plain = runner.invoke(main, ["payoff", "--format", "json"])
    sf = runner.invoke(main, ["payoff", "--sf", "--format", "json"])
    p0_plain = json.loads(plain.output)["rows"][0]["payoff"]
    p0_sf = json.loads(sf.output)["rows"][0]["payoff"]
    assert p0_sf == p0_plain - 50


def test_recommend_default_fixture(runner):
    result = runner.invoke(main, ["recommend"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["recommended"] == "HQ"
    assert report["deals_total"] == 12


def test_recommend_scenario_file(runner, tmp_path):
    from qskat.advisor import load_showcase_scenario

    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(load_showcase_scenario().to_json()))
    result = runner.invoke(main, ["recommend", str(path)])
    assert result.exit_code == 0
    assert json.loads(result.output)["recommended"] == "HQ"


def test_bench_emits_csv_rows(runner, tmp_path):
    out = tmp_path / "bench.csv"
    result = runner.invoke(
        main, ["bench", "--cards", "2-3", "--samples", "2", "--out", str(out)])
    assert result.exit_code == 0, result.output
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("cards,deck,deals")
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "2"
    assert int(first[2]) == 2520  # 8!/(2!2!2!2!)
    assert (tmp_path / "bench.png").exists()
