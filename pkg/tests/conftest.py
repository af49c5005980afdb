"""Shared fixtures.

The scenario reports are expensive (about half a minute to a minute
each), so they are computed once per session and shared between the
harness tests and the acceptance suite.
"""

import warnings

import numpy as np
import pytest

from anonybench.attribution import make_learner
from anonybench.corpus import grouped_kfold, preprocess
from anonybench.features import FeaturePipeline, extract_source
from anonybench.harness import ScenarioConfig, run_scenario
from anonybench.normalize import spec_from_name
from anonybench.synth import generate_synthetic_corpus, synthetic_profiles

SYNTH_AUTHORS = 10
SYNTH_TASKS = 8
SYNTH_SEED = 7


@pytest.fixture(scope="session")
def corpus10x8():
    return generate_synthetic_corpus(SYNTH_AUTHORS, SYNTH_TASKS, seed=SYNTH_SEED)


@pytest.fixture(scope="session")
def profiles10():
    return synthetic_profiles(SYNTH_AUTHORS, seed=SYNTH_SEED)


def _run(corpus, scenario, technique):
    config = ScenarioConfig(scenario, spec_from_name(technique), learner="forest", k=5, seed=0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return run_scenario(corpus, config)


@pytest.fixture(scope="session")
def baseline_report(corpus10x8):
    return _run(corpus10x8, "static", "identity")


@pytest.fixture(scope="session")
def static_report(corpus10x8):
    return _run(corpus10x8, "static", "normalize")


@pytest.fixture(scope="session")
def augment_report(corpus10x8):
    return _run(corpus10x8, "adaptive-augment", "normalize")


@pytest.fixture(scope="session")
def xformed_report(corpus10x8):
    return _run(corpus10x8, "adaptive-xformed", "normalize")


@pytest.fixture(scope="session")
def fold_models(corpus10x8):
    """Per-fold fitted (pipeline, model, test programs), mirroring what the
    static identity scenario trains, for decomposition and leakage checks."""
    programs = [preprocess(p) for p in corpus10x8.programs]
    out = []
    for plan in grouped_kfold(corpus10x8):
        train = [programs[i] for i in plan.train_indices]
        test = [programs[i] for i in plan.test_indices]
        vectors = [extract_source(p.source) for p in train]
        labels = [p.author for p in train]
        pipeline = FeaturePipeline(select_top=1500)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            pipeline.fit(vectors, labels)
        X = pipeline.transform_matrix(vectors)
        model = make_learner("forest", seed=plan.fold_index)
        model.fit(X, np.asarray(labels, dtype=object))
        out.append((plan, pipeline, model, test))
    return out
