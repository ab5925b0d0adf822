"""scikit-learn style front end.

``fit`` synthesizes the composed network from (triple, decision) rows;
``predict`` answers each triple by model checking whether the user can
reach ``Share`` with the observers recording that triple.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .checker import check
from .errors import ModelError
from .model import DisclosureRecord, check_consistent
from .oracle import share_query
from .synthesis import build_user_network
from .validation import check_decisions, check_triples


class DisclosureModelClassifier(ClassifierMixin, BaseEstimator):
    """Personal disclosure model as a binary classifier.

    Parameters
    ----------
    intermediate : {"plain", "urgent", "committed"}
        Flag given to the behavioral automaton's intermediate locations.
    user_id : str
        Name recorded on the synthetic records built from ``X``.
    """

    def __init__(self, intermediate="plain", user_id="user"):
        self.intermediate = intermediate
        self.user_id = user_id

    def fit(self, X, y):
        triples = check_triples(X)
        decisions = check_decisions(y, len(triples))
        records = [
            DisclosureRecord(str(self.user_id), i, *t, bool(d)) for i, (t, d) in enumerate(zip(triples, decisions))
        ]
        try:
            check_consistent(records)
        except ModelError as err:
            raise ValueError(str(err)) from err
        self.network_ = build_user_network(records, intermediate=self.intermediate)
        self.shared_ = sorted({r.triple for r in records if r.shared}, key=lambda t: tuple(m.name for m in t))
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = 3
        self._cache = {}
        return self

    def _answer(self, triple) -> bool:
        if triple not in self._cache:
            self._cache[triple] = check(self.network_, share_query(triple)).satisfied
        return self._cache[triple]

    def predict(self, X):
        check_is_fitted(self, "network_")
        return np.array([int(self._answer(t)) for t in check_triples(X)], dtype=int)

    def verify(self, query):
        """Check an arbitrary query against the fitted network."""
        check_is_fitted(self, "network_")
        return check(self.network_, query)
