"""Command-line front end: experiments, golden-number reports, advisor API."""

from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from pathlib import Path
from typing import Optional

import click

from . import demos, oracle, scoring
from .advisor import Scenario, load_showcase_scenario
from .encoding import (
    Card,
    DealSpec,
    GameType,
    Suit,
    build_order,
    deal_count,
    enumerate_deals,
    full_deck,
)
from .qsim import basis_label, measure_histogram
from .scoring import PayoffParams, payoff_curve, quantum_count


def _format_table(rows, header) -> str:
    cells = [[str(c) for c in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
              for i, h in enumerate(header)]
    def line(row):
        return "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
    rule = "  ".join("-" * w for w in widths)
    return "\n".join([line(header), rule, *(line(r) for r in cells)])


def _emit(data, fmt: str, pretty: bool, out: Optional[str], csv_rows=None,
          csv_header=None) -> None:
    """Write the report: JSON by default, CSV rows on request, an aligned
    text table for human eyes under --pretty."""
    if pretty and csv_rows is not None:
        text = _format_table(csv_rows, csv_header or [])
    elif fmt == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf)
        if csv_header:
            writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = json.dumps(data, indent=2 if pretty else None)
    if out:
        Path(out).write_text(text + ("\n" if not text.endswith("\n") else ""))
        click.echo(f"wrote {out}")
    else:
        click.echo(text)


def _out_with_suffix(out: Optional[str], suffix: str) -> Optional[str]:
    if not out:
        return None
    return str(Path(out).with_suffix(suffix))


@click.group()
def main() -> None:
    """Quantum-circuit engine and table advisor for trick-taking games."""


@main.command()
@click.option("--shots", default=1000, show_default=True, type=int)
@click.option("--seed", default=7, show_default=True, type=int)
@click.option("--stage", default="final", show_default=True,
              type=click.Choice(demos.TOY_STAGES))
@click.option("--out", default=None, help="Report file; .png figure lands alongside.")
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]))
@click.option("--pretty", is_flag=True)
def toy(shots: int, seed: int, stage: str, out: Optional[str], fmt: str,
        pretty: bool) -> None:
    """Run the four-card game to a stage; report histogram and amplitudes."""
    t0 = time.perf_counter()
    states = demos.toy_stage_states()
    state = states[stage]
    counts = measure_histogram(state, shots, seed)
    elapsed = time.perf_counter() - t0

    expected = {
        "initial": (6, [1 / 6]),
        "a-played": (12, [1 / 12]),
        "b-played": (24, [1 / 24]),
        "trick1": (24, [1 / 24]),
        "final": (8, [1 / 4, 1 / 12]),
    }[stage]
    support_ok = len(state) == expected[0]
    probs_ok = all(
        any(abs(p - e) < 1e-12 for e in expected[1])
        for p in state.probabilities().values()
    )
    amplitudes = {
        basis_label(k, state.width): round(state.entries[k].real, 12)
        for k in sorted(state.entries)
    }
    report = {
        "stage": stage,
        "width": state.width,
        "shots": shots,
        "seed": seed,
        "support": len(state),
        "mode": "exact",
        "counts": counts,
        "amplitudes": amplitudes,
        "script": demos.toy_script(),
        "checks": {
            "support_size": support_ok,
            "stage_probabilities": probs_ok,
            "norm": abs(state.norm() - 1.0) < 1e-9,
        },
        "elapsed_s": round(elapsed, 6),
    }
    click.echo(f"stage {stage}: support {len(state)}", err=True)
    for label, amp in amplitudes.items():
        click.echo(f"  {label}  {amp:+.12f}", err=True)
    for name, ok in report["checks"].items():
        click.echo(f"  check {name}: {'pass' if ok else 'FAIL'}", err=True)
    rows = sorted(counts.items())
    _emit(report, fmt, pretty, out, csv_rows=rows, csv_header=["label", "count"])
    png = _out_with_suffix(out, ".png")
    if png:
        from .plots import save_histogram

        save_histogram(counts, png, title=f"four-card game, stage {stage}")
        click.echo(f"wrote {png}")
    if not all(report["checks"].values()):
        raise SystemExit(1)


def _showcase_quantum_section(mode: str, lead: Card) -> dict:
    """Run the nine-card evolution and report support and conservation."""
    from .encoding import STACK
    from .gates import run_script

    if mode == "hybrid":
        runner = demos.showcase_hybrid_runner()
        runner.state = runner.circuit.fixed_first_card(
            runner.state, demos.SHOWCASE_OUR_SEAT, lead)
        lead_pos = runner.circuit.layout.card_index(lead)
        from .gates import TrickContext

        runner.context = {
            key: TrickContext(demos.SHOWCASE_OUR_SEAT,
                              ((demos.SHOWCASE_OUR_SEAT, lead_pos),))
            for key in runner.state.entries
        }
        for _ in range(3):
            runner.run_round()
        state = runner.state
        layout = runner.circuit.layout
    else:
        circuit = demos.showcase_circuit()
        state = run_script(circuit, demos.showcase_initial_state(),
                           demos.showcase_script(lead))
        layout = circuit.layout
    total = sum(c.points for c in layout.cards)
    conserved = all(
        sum(layout.cards[i].points for i in range(layout.n_cards)
            if layout.location(key, i) == STACK) == total
        for key in state.entries
    )
    return {
        "mode": mode,
        "lead": lead.shorthand(),
        "initial_support": 12,
        "final_support": len(state),
        "norm": round(state.norm(), 12),
        "points_conserved": conserved,
    }


REDUCED_HANDS = (3, 4, 5, 6, 7, 8, 9, 10)


def _reduced_deal_counts() -> list[dict]:
    rows = []
    for x in REDUCED_HANDS:
        n = 3 * x + 2
        count = (
            math.comb(n, x) * math.comb(n - x, x) * math.comb(n - 2 * x, x)
        )
        rows.append({"cards": x, "deck": n, "deals": count})
    return rows


@main.command()
@click.argument("spec_file", required=False, type=click.Path(exists=True))
@click.option("--out", default=None)
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]))
@click.option("--pretty", is_flag=True)
def deals(spec_file: Optional[str], out: Optional[str], fmt: str, pretty: bool) -> None:
    """Count deals for a spec file, or report the built-in golden numbers."""
    if spec_file:
        spec = DealSpec.from_json(json.loads(Path(spec_file).read_text()))
        report = {"count": deal_count(spec), "spec": spec.to_json()}
        _emit(report, fmt, pretty, out,
              csv_rows=[[report["count"]]], csv_header=["count"])
        return
    deck = full_deck()
    game = GameType("suit", Suit.SPADES)
    full = DealSpec(deck, 3, 10, 2, game)
    known = DealSpec(deck, 3, 10, 2, game,
                     constraints=tuple((c, 0) for c in deck[:10]))
    toy_count = deal_count(demos.toy_spec())
    reduced = _reduced_deal_counts()
    report = {
        "full_deal_count": deal_count(full),
        "known_hand_count": deal_count(known),
        "toy_count": toy_count,
        "reduced_games": reduced,
    }
    rows = [[r["cards"], r["deck"], r["deals"]] for r in reduced]
    _emit(report, fmt, pretty, out, csv_rows=rows,
          csv_header=["cards", "deck", "deals"])


@main.command()
@click.option("--mode", default="oracle", show_default=True,
              type=click.Choice(["oracle", "hybrid", "exact"]),
              help="Also run the quantum evolution in the chosen mode.")
@click.option("--out", default=None)
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]))
@click.option("--pretty", is_flag=True)
def showcase(mode: str, out: Optional[str], fmt: str, pretty: bool) -> None:
    """Quality table for the nine-card end game."""
    t0 = time.perf_counter()
    spec = demos.showcase_spec()
    order = build_order(spec.deck, spec.game)
    qualities = []
    for card in demos.SHOWCASE_HAND:
        wins, total = oracle.card_quality(
            spec, card, our_seat=demos.SHOWCASE_OUR_SEAT,
            declarer=demos.SHOWCASE_DECLARER_SEAT,
            declarer_points=demos.SHOWCASE_DECLARER_POINTS,
            defender_points=demos.SHOWCASE_DEFENDER_POINTS,
        )
        qualities.append({
            "card": card.shorthand(),
            "q_bar": wins,
            "deals_total": total,
            "p_win": round(wins / total, 4),
        })
    unbeatable = []
    for deal in enumerate_deals(spec):
        beat = False
        for card in demos.SHOWCASE_HAND:
            state = oracle.state_from_deal(
                deal, spec, declarer=demos.SHOWCASE_DECLARER_SEAT,
                leader=demos.SHOWCASE_OUR_SEAT,
                declarer_points=demos.SHOWCASE_DECLARER_POINTS,
                defender_points=demos.SHOWCASE_DEFENDER_POINTS,
            )
            state = oracle.play_card(state, card, order)
            result = oracle.solve_deal(state, order)
            if not oracle.declarer_wins(result.declarer_points, result.defender_points):
                beat = True
                break
        if not beat:
            unbeatable.append({
                "declarer": [c.shorthand() for c in deal.hand(spec, 2)],
                "partner": [c.shorthand() for c in deal.hand(spec, 1)],
            })
    recommended = max(qualities, key=lambda q: q["q_bar"])
    report = {
        "qualities": qualities,
        "recommended": recommended["card"],
        "p_win": recommended["p_win"],
        "unbeatable_deals": unbeatable,
        "mode": mode,
        "elapsed_s": round(time.perf_counter() - t0, 3),
    }
    if mode != "oracle":
        lead = Card.parse(recommended["card"])
        report["quantum"] = _showcase_quantum_section(mode, lead)
        report["script"] = demos.showcase_script(lead)
    rows = [[q["card"], q["q_bar"], q["deals_total"], q["p_win"]] for q in qualities]
    _emit(report, fmt, pretty, out, csv_rows=rows,
          csv_header=["card", "q_bar", "deals_total", "p_win"])


@main.command()
@click.option("--t", "t_bits", default=7, show_default=True, type=int,
              help="Counting-register width in qubits.")
@click.option("--out", default=None)
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]))
@click.option("--pretty", is_flag=True)
def qcount(t_bits: int, out: Optional[str], fmt: str, pretty: bool) -> None:
    """Count the valid four-card deals inside the raw 2^4 assignment space."""
    valid = set()
    for deal in enumerate_deals(demos.toy_spec()):
        bits = 0
        for i, holder in enumerate(deal.holders):
            bits |= holder << i
        valid.add(bits)
    result = quantum_count(lambda k: k in valid, list(range(16)), t_bits)
    report = {
        "t": t_bits,
        "n_total": result.n_total,
        "true_count": len(valid),
        "phase": result.phase,
        "modal_outcome": result.modal_outcome,
        "estimate": result.estimate,
        "error": abs(result.estimate - len(valid)),
        "resolution_bound": result.resolution_bound(),
    }
    _emit(report, fmt, pretty, out,
          csv_rows=[[t_bits, result.estimate, report["error"]]],
          csv_header=["t", "estimate", "error"])
    png = _out_with_suffix(out, ".png")
    if png:
        from .plots import save_count_distribution

        save_count_distribution(result.distribution, png)
        click.echo(f"wrote {png}")


@main.command()
@click.option("--sf", is_flag=True, help="Seeger-Fabian tournament scoring.")
@click.option("--run-length", default=1, show_default=True, type=int,
              help="Matador run assumed for every choice.")
@click.option("--grid", default=101, show_default=True, type=int)
@click.option("--out", default=None)
@click.option("--format", "fmt", default="csv", type=click.Choice(["json", "csv"]))
@click.option("--pretty", is_flag=True)
def payoff(sf: bool, run_length: int, grid: int, out: Optional[str], fmt: str,
           pretty: bool) -> None:
    """Tabulate the payoff curves over a winning-probability grid."""
    params = PayoffParams(seeger_fabian=sf)
    choices = scoring.default_payoff_choices(run_length)
    ps = [i / (grid - 1) for i in range(grid)]
    rows = payoff_curve(choices, ps, params)
    report = {
        "seeger_fabian": sf,
        "choices": choices,
        "rows": [{"p": p, "choice": c, "payoff": v} for p, c, v in rows],
    }
    _emit(report, fmt, pretty, out,
          csv_rows=[[f"{p:.4f}", c, f"{v:.6f}"] for p, c, v in rows],
          csv_header=["p", "choice", "payoff"])
    png = _out_with_suffix(out, ".png")
    if png:
        from .plots import save_payoff_curves

        save_payoff_curves(rows, png)
        click.echo(f"wrote {png}")


@main.command()
@click.argument("scenario_file", required=False, type=click.Path(exists=True))
@click.option("--out", default=None)
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "csv"]))
@click.option("--pretty", is_flag=True)
def recommend(scenario_file: Optional[str], out: Optional[str], fmt: str,
              pretty: bool) -> None:
    """Recommend a card for a scenario file (default: the shipped fixture)."""
    from .advisor import AdvisorSession

    if scenario_file:
        scenario = Scenario.from_json(json.loads(Path(scenario_file).read_text()))
    else:
        scenario = load_showcase_scenario()
    session = AdvisorSession(scenario)
    view = session.view()
    report = {
        "qualities": view["qualities"],
        "recommended": view["recommended"],
        "p_win": view["p_win"],
        "deals_total": view["deals_total"],
    }
    rows = [[q["card"], q["q_bar"], q["deals_total"], q["p_win"]]
            for q in view["qualities"]]
    _emit(report, fmt, pretty, out, csv_rows=rows,
          csv_header=["card", "q_bar", "deals_total", "p_win"])


@main.command()
@click.option("--cards", default="2-4", show_default=True,
              help="Hand sizes to benchmark, e.g. '2-4' or '3'.")
@click.option("--samples", default=5, show_default=True, type=int)
@click.option("--seed", default=11, show_default=True, type=int)
@click.option("--out", default=None)
@click.option("--format", "fmt", default="csv", type=click.Choice(["json", "csv"]))
@click.option("--pretty", is_flag=True)
def bench(cards: str, samples: int, seed: int, out: Optional[str], fmt: str,
          pretty: bool) -> None:
    """Time the oracle solver across reduced 3x+2-card games."""
    if "-" in cards:
        lo, hi = (int(v) for v in cards.split("-", 1))
    else:
        lo = hi = int(cards)
    rng = random.Random(seed)
    deck = full_deck()
    game = GameType("suit", Suit.SPADES)
    order = build_order(deck, game)
    canonical = order.canonical(deck)
    rows = []
    for x in range(lo, hi + 1):
        sub_deck = canonical[: 3 * x + 2]
        spec = DealSpec(tuple(sub_deck), 3, x, 2, game)
        total = deal_count(spec)
        elapsed = 0.0
        for _ in range(samples):
            holders = [0] * x + [1] * x + [2] * x + [3, 3]
            rng.shuffle(holders)
            from .encoding import Deal

            deal = Deal(tuple(holders))
            state = oracle.state_from_deal(deal, spec, declarer=0, leader=0)
            t0 = time.perf_counter()
            oracle.solve_deal(state, order)
            elapsed += time.perf_counter() - t0
        per_game = elapsed / samples
        rows.append({
            "cards": x,
            "deck": 3 * x + 2,
            "deals": total,
            "time_per_game_s": per_game,
            "projected_total_s": per_game * total,
        })
    report = {"samples": samples, "rows": rows}
    _emit(report, fmt, pretty, out,
          csv_rows=[[r["cards"], r["deck"], r["deals"],
                     f"{r['time_per_game_s']:.6f}",
                     f"{r['projected_total_s']:.3f}"] for r in rows],
          csv_header=["cards", "deck", "deals", "time_per_game_s",
                      "projected_total_s"])
    png = _out_with_suffix(out, ".png")
    if png:
        from .plots import save_bench_curve

        save_bench_curve(rows, png)
        click.echo(f"wrote {png}")


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--state-dir", default=None, type=click.Path())
def serve(port: int, host: str, state_dir: Optional[str]) -> None:
    """Serve the advisor HTTP API (and the UI when a build is present)."""
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(state_dir=state_dir), host=host, port=port,
                log_level="warning")


if __name__ == "__main__":  # pragma: no cover
    main()
