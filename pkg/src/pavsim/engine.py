"""Experiment orchestration.

Expands phase trial lists, injects configural cues, runs trials sequentially
or in randomized order with run averaging, carries stimulus state across
phases, and records every history a plot or export may need.
"""
from __future__ import annotations

import hashlib
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from .dsl import ExperimentSpec, PhaseSpec
from .models import Model, ModelParameters, RunParameters, StimulusState, get_model
from .stimuli import US, StimulusId, TrialSpec

Snapshot = tuple[float, float, float, float, float, float]
SNAPSHOT_FIELDS = ("v", "v_e", "v_i", "alpha", "alpha_mack", "alpha_hall")


class ValidationError(ValueError):
    """Bad inputs to a simulation; ``problems`` lists every offender."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


@dataclass
class PhaseResult:
    """Recorded histories of one phase of one group.

    ``cs_series`` maps each stimulus (including configural cues) to its
    appearance-ordered pre-trial snapshots.  ``trial_type_series`` maps a
    canonical trial string (e.g. ``"AX-"``) to the compound value at each
    occurrence of that trial type; ``compound_series`` does the same keyed by
    the stimulus set alone.  For randomized phases every element is the mean
    over runs at the same index.
    """

    cs_series: dict[str, list[Snapshot]] = field(default_factory=dict)
    trial_type_series: dict[str, list[float]] = field(default_factory=dict)
    compound_series: dict[str, list[float]] = field(default_factory=dict)
    final_states: dict[str, StimulusState] = field(default_factory=dict)


@dataclass
class GroupResult:
    name: str
    phases: list[PhaseResult]


@dataclass
class SimulationResult:
    model_name: str
    seed: int
    groups: list[GroupResult]


# One expanded trial: ((key, id) pairs of present stimuli, trial-type string,
# compound string or None, US marker).
_Expanded = tuple[tuple[tuple[str, StimulusId], ...], str, str | None, US]


def _expand_phase(phase: PhaseSpec, configural: bool) -> list[_Expanded]:
    out: list[_Expanded] = []
    cache: dict[TrialSpec, _Expanded] = {}
    for trial in phase.expanded():
        entry = cache.get(trial)
        if entry is None:
            ids = trial.ordered_stimuli
            if configural and len(ids) >= 2:
                present = ids + (StimulusId.configural(ids),)
            else:
                present = ids
            compound = "".join(str(s) for s in ids) if len(ids) >= 2 else None
            entry = (tuple((str(s), s) for s in present), str(trial), compound, trial.us)
            cache[trial] = entry
        out.append(entry)
    return out


def _initial_alpha(sid: StimulusId, params: ModelParameters) -> float:
    key = str(sid)
    if key in params.alpha_overrides:
        return params.alpha_overrides[key]
    if sid.is_configural:
        # Emergent cue: salience defaults to the product of its constituents'
        # initial rates.
        return math.prod(_initial_alpha(p, params) for p in sid.parts)
    return params.alpha


def make_state(sid: StimulusId, params: ModelParameters) -> StimulusState:
    """Fresh state for a stimulus entering the simulation."""
    key = str(sid)
    alpha = _initial_alpha(sid, params)
    alpha0 = params.alpha0_override if params.alpha0_override is not None else alpha
    return StimulusState(
        alpha=alpha,
        alpha_mack=params.alpha_mack_overrides.get(key, params.alpha_mack),
        alpha_hall=params.alpha_hall_overrides.get(key, params.alpha_hall),
        salience=params.salience_overrides.get(key, params.salience),
        alpha0=alpha0,
    )


def inject_configural_cues(trials: Iterable[TrialSpec]) -> list[tuple[StimulusId, ...]]:
    """Present-stimulus tuples for each trial, with the compound's configural
    cue appended whenever the trial has two or more stimuli."""
    out = []
    for trial in trials:
        ids = trial.ordered_stimuli
        if len(ids) >= 2:
            ids = ids + (StimulusId.configural(ids),)
        out.append(ids)
    return out


def compound_value(
    states: dict[str, StimulusState],
    stimulus_set: Iterable[StimulusId],
    configural_enabled: bool = False,
) -> float:
    """Predictive value of a compound: sum of member strengths, plus the
    configural cue's strength when enabled and the set has >= 2 members."""
    ids = tuple(stimulus_set)
    total = sum(states[str(s)].v for s in ids if str(s) in states)
    if configural_enabled and len(ids) >= 2:
        q = str(StimulusId.configural(ids))
        if q in states:
            total += states[q].v
    return total


def _run_trials(
    states: dict[str, StimulusState],
    expanded: list[_Expanded],
    params: ModelParameters,
    model: type[Model],
    beta_plus: float,
    lam_base: float,
) -> PhaseResult:
    """Run already-expanded trials in order, mutating ``states`` in place."""
    result = PhaseResult()
    cs_series = result.cs_series
    tt_series = result.trial_type_series
    cp_series = result.compound_series
    step = model.step
    beta_neg = params.beta_neg
    for present, trial_key, compound_key, us in expanded:
        if us is US.DOUBLE_PLUS:
            rp_beta, rp_lam, sign = 2.0 * beta_plus, lam_base, 1
        elif us is US.PLUS:
            rp_beta, rp_lam, sign = beta_plus, lam_base, 1
        else:
            rp_beta, rp_lam, sign = beta_neg, 0.0, -1

        sigma = sigma_e = sigma_i = 0.0
        row: list[tuple[str, StimulusState]] = []
        for key, sid in present:
            st = states.get(key)
            if st is None:
                st = make_state(sid, params)
                states[key] = st
            sigma += st.v
            sigma_e += st.v_e
            sigma_i += st.v_i
            row.append((key, st))

        # Histories record the pre-update values.
        for key, st in row:
            series = cs_series.get(key)
            if series is None:
                series = cs_series[key] = []
            series.append((st.v, st.v_e, st.v_i, st.alpha, st.alpha_mack, st.alpha_hall))
        tt_series.setdefault(trial_key, []).append(sigma)
        if compound_key is not None:
            cp_series.setdefault(compound_key, []).append(sigma)

        rp = RunParameters(rp_beta, rp_lam, sign, sigma, sigma_e, sigma_i)
        for key, st in row:
            states[key] = step(st, rp, params)
    result.final_states = dict(states)
    return result


def _phase_overrides(phase: PhaseSpec, params: ModelParameters) -> tuple[float, float]:
    beta_plus = phase.beta_override if phase.beta_override is not None else params.beta
    lam = phase.lambda_override if phase.lambda_override is not None else params.lamda
    return beta_plus, lam


def run_phase_sequential(
    states: dict[str, StimulusState],
    phase: PhaseSpec,
    params: ModelParameters,
    model: type[Model],
) -> tuple[PhaseResult, dict[str, StimulusState]]:
    """Run one phase in design order; returns histories and outgoing states."""
    expanded = _expand_phase(phase, params.configural_cues)
    beta_plus, lam = _phase_overrides(phase, params)
    new_states = dict(states)
    result = _run_trials(new_states, expanded, params, model, beta_plus, lam)
    return result, new_states


def derive_seed(*parts) -> int:
    """Deterministic, platform-independent sub-seed derivation."""
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


# Shared payload for randomized-run workers (set once per worker process).
_WORKER_PAYLOAD: tuple | None = None


def _init_worker(payload) -> None:
    global _WORKER_PAYLOAD
    _WORKER_PAYLOAD = payload


def _one_random_run(run_seed: int, payload=None) -> PhaseResult:
    expanded, states, params, model_name, beta_plus, lam = (
        payload if payload is not None else _WORKER_PAYLOAD
    )
    model = get_model(model_name)
    order = list(expanded)
    random.Random(run_seed).shuffle(order)
    return _run_trials(dict(states), order, params, model, beta_plus, lam)


def _mean_state(acc: list[float], n: int) -> StimulusState:
    return StimulusState(*(x / n for x in acc))


def run_phase_randomized(
    states: dict[str, StimulusState],
    phase: PhaseSpec,
    params: ModelParameters,
    model: type[Model],
    rng_seed: int,
    max_workers: int = 1,
) -> tuple[PhaseResult, dict[str, StimulusState]]:
    """Run one randomized phase: shuffle the expanded trial list once per run,
    run each shuffle sequentially from the incoming states, and average the
    histories and final states element-wise over runs.

    Runs are reduced in run-index order, so serial and parallel execution are
    bit-identical.
    """
    expanded = _expand_phase(phase, params.configural_cues)
    if not expanded:
        return PhaseResult(final_states=dict(states)), dict(states)
    beta_plus, lam = _phase_overrides(phase, params)
    n = params.num_random_runs
    seeds = [derive_seed(rng_seed, run) for run in range(n)]
    payload = (expanded, states, params, model.name, beta_plus, lam)

    if max_workers > 1 and n > 1:
        executor = ProcessPoolExecutor(
            max_workers=max_workers, initializer=_init_worker, initargs=(payload,)
        )
        with executor:
            runs = executor.map(_one_random_run, seeds, chunksize=max(1, n // (4 * max_workers)))
            result, final_acc = _accumulate_runs(runs)
    else:
        runs = (_one_random_run(seed, payload) for seed in seeds)
        result, final_acc = _accumulate_runs(runs)

    for key, rows in result.cs_series.items():
        result.cs_series[key] = [tuple(x / n for x in row) for row in rows]
    for series in (result.trial_type_series, result.compound_series):
        for key, vals in series.items():
            series[key] = [x / n for x in vals]
    final = {key: _mean_state(acc, n) for key, acc in final_acc.items()}
    result.final_states = final
    return result, final


def _accumulate_runs(runs: Iterable[PhaseResult]):
    """Element-wise sums over runs, accumulated in iteration order."""
    sums = PhaseResult()
    final_acc: dict[str, list[float]] = {}
    first = True
    for run in runs:
        if first:
            for key, rows in run.cs_series.items():
                sums.cs_series[key] = [list(row) for row in rows]
            for key, vals in run.trial_type_series.items():
                sums.trial_type_series[key] = list(vals)
            for key, vals in run.compound_series.items():
                sums.compound_series[key] = list(vals)
            for key, st in run.final_states.items():
                final_acc[key] = [
                    st.v, st.v_e, st.v_i, st.alpha, st.alpha_mack, st.alpha_hall,
                    st.salience, st.alpha0,
                ]
            first = False
            continue
        for key, rows in run.cs_series.items():
            acc = sums.cs_series[key]
            for i, row in enumerate(rows):
                a = acc[i]
                a[0] += row[0]
                a[1] += row[1]
                a[2] += row[2]
                a[3] += row[3]
                a[4] += row[4]
                a[5] += row[5]
        for key, vals in run.trial_type_series.items():
            acc_v = sums.trial_type_series[key]
            for i, v in enumerate(vals):
                acc_v[i] += v
        for key, vals in run.compound_series.items():
            acc_v = sums.compound_series[key]
            for i, v in enumerate(vals):
                acc_v[i] += v
        for key, st in run.final_states.items():
            a = final_acc[key]
            a[0] += st.v
            a[1] += st.v_e
            a[2] += st.v_i
            a[3] += st.alpha
            a[4] += st.alpha_mack
            a[5] += st.alpha_hall
            a[6] += st.salience
            a[7] += st.alpha0
    # Convert summed snapshot lists back; caller divides by run count.
    sums.cs_series = {k: [tuple(r) for r in rows] for k, rows in sums.cs_series.items()}
    return sums, final_acc


ProgressCallback = Callable[[str, int, int], None]


def run_experiment(
    spec: ExperimentSpec,
    params: ModelParameters,
    model_name: str,
    seed: int = 0,
    max_workers: int = 1,
    progress: ProgressCallback | None = None,
) -> SimulationResult:
    """Simulate every group of an experiment independently, phases in order,
    carrying stimulus state from each phase into the next."""
    model = get_model(model_name)
    problems = params.validate()
    if problems:
        raise ValidationError(problems)

    groups: list[GroupResult] = []
    for name, phases in spec.groups:
        states: dict[str, StimulusState] = {}
        phase_results: list[PhaseResult] = []
        for index, phase in enumerate(phases):
            if phase.randomized and not phase.is_empty:
                phase_seed = derive_seed(seed, name, index)
                result, states = run_phase_randomized(
                    states, phase, params, model, phase_seed, max_workers=max_workers
                )
            else:
                result, states = run_phase_sequential(states, phase, params, model)
            phase_results.append(result)
            if progress is not None:
                progress(name, index + 1, len(phases))
        groups.append(GroupResult(name=name, phases=phase_results))
    return SimulationResult(model_name=model_name, seed=seed, groups=groups)
