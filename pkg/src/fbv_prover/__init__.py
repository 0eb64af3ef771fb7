"""Prover and analysis toolkit for the deep-inference systems FBV/BV."""

from .oracle import (AgreementReport, LimitExceeded, NotApplicable,
                     SearchConfig, SearchStats, Searcher, cross_validate,
                     derive, prove_exhaustive, provable_continuations,
                     splitting_spotcheck)
from .relweb import (DuplicateAtoms, InvalidWeb, NoPartition, RelationWeb,
                     Violation, WebCandidate, c1_check, c2_check,
                     check_s1_s7, dump_web, web_candidate, web_of,
                     web_to_structure)
from .rules import (BV_RULES, FBV_RULES, Derivation, RuleInstance, RuleName,
                    StaleInstance, apply_instance, check_derivation,
                    enumerate_ai_down, enumerate_q_down, enumerate_rule,
                    enumerate_switch, is_interaction, is_lazy_interaction,
                    is_pruned, o_down_instance)
from .strategy import (INFINITE, DeadEnd, FlatOnly, IncTable, Inconclusive,
                       NotProvable, PreconditionViolated, Provable, ainc,
                       ainc_recursive, inc, inc_table, prove_strategy, step)
from .structure import (OccurrenceSet, Structure, atom, canonicalize, copar,
                        distinct_pairs_check, negate, normalize, occurrences,
                        par, seq, unit)
from .syntax import NegatedNonAtom, ParseError, parse, render

__all__ = [name for name in dir() if not name.startswith("_")]
