"""Decision support for requirements prioritization and release planning."""

__version__ = "0.1.0"

from .consensus import (AssignmentPreferences, ChangeMetric, ConsensusConfig,
                        ConsensusResult, FairnessForm, Objective, change_counts,
                        consensus_oracle, evaluate_objective, plan_consensus)
from .constraints import (ConstraintKind, Csp, Hardness, ReleaseConstraint,
                          ReleaseVar, all_min_conflicts, check_consistency,
                          conflict_oracle, make_vars, min_conflict, min_diagnosis,
                          satisfied, solve)
from .factorization import (FactorModel, TrainConfig, complete_matrix, factorize,
                            gradient_check, predict)
from .keywords import (KeywordProfile, SimilarityMatrix, normalize_keywords,
                       recommend_validators, similarity, similarity_matrix)
from .model import (EvaluationMatrix, InterestDimension, PreferenceSet,
                    ProjectModel, ReleaseHorizon, Requirement, Stakeholder,
                    ValidationIssue, validate_project)
from .mvp import MvpItem, MvpProblem, MvpSolution, mvp_oracle, select_mvp
from .project_io import (EngineConfig, ProjectDocument, load_document,
                         load_fixture, load_project, save_document)
from .utility import (MissingValuePolicy, NormalizationMode, UtilityConfig,
                      UtilityReport, dimension_utility, overall_utility, rank)
