"""Two-pass entity disambiguation and linking."""

from .disambiguate import disambiguate, final_disambiguation
from .features import (context_window, feature_entity_cooccurr, feature_topic_sim,
                       feature_vector, jaccard)
from .firstpass import easy_rule, first_pass
from .model import (ClassifierModel, LogisticHyper, TreeHyper, TreeNode, classify_and_score,
                    logistic_loss_and_grad, train_logistic, train_tree)
from .training import TrainingExample, generate_training_examples, train_model

__all__ = [
    "ClassifierModel", "LogisticHyper", "TrainingExample", "TreeHyper", "TreeNode",
    "classify_and_score", "context_window", "disambiguate", "easy_rule",
    "feature_entity_cooccurr", "feature_topic_sim", "feature_vector", "final_disambiguation",
    "first_pass", "generate_training_examples", "jaccard", "logistic_loss_and_grad",
    "train_logistic", "train_model", "train_tree",
]
