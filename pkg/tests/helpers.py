"""Corpus access shared by the property tests."""
import random

from dimres.oracle.generate import GenParams, random_model, random_rb_formula

DEFAULTS = GenParams()


def corpus_instance(seed, params=DEFAULTS, nesting=2):
    model = random_model(GenParams(**{**params.__dict__, "seed": seed}))
    rng = random.Random(seed)
    return model, random_rb_formula(rng, model, params.max_bound, nesting), rng
