"""Bracketing compound nouns with a probabilistic model of modification.

The model scores modificational structures (which word modifies which)
using category-to-category association probabilities estimated from
counts of two-word compounds, with thesaurus categories as word senses.
"""

from .analyzer import (
    Compound, ScoredAnalysis, analyze, log_score_structure, resolve_senses,
    score_structure_bruteforce, score_structure_dp,
)
from .errors import DomainError, NounforgeError, ParseError, ValidationError
from .evaluation import EvalReport, GoldItem, evaluate, read_gold
from .lexicon import (
    Category, Thesaurus, Word, ambiguity, cats, dump_thesaurus, load_thesaurus, sense_prior,
    sense_prior_exact, sense_priors,
)
from .model import (
    AssociationModel, PairCounts, extract_pairs, ingest_pair_counts, load_model, raw_affinity,
    save_model, train,
)
from .structures import (
    Leaf, ModStructure, Node, bracket_text, choice, enumerate_parses, enumerate_structures,
    generable_strings, parse_bracket, parse_to_structure, structure_to_parse,
)

__version__ = "0.1.0"
