import math

import pytest

from streamclust.clusters import ClusterStore
from streamclust.features import TextVector


def tv(features, text_id=0):
    return TextVector(text_id, dict(features), sum(features.values()))


class TestCreate:
    def test_direct_construction(self):
        store = ClusterStore()
        h = store.create_cluster(tv({"ai": 1, "improves": 1}), stamp=1)
        cf = store.get(h)
        assert cf.features == {"ai": 1, "improves": 1}
        assert cf.feature_total == 2
        assert cf.text_count == 1
        assert cf.stamp == 1

    def test_empty_text_cluster_allowed(self):
        store = ClusterStore()
        h = store.create_cluster(tv({}), stamp=7)
        cf = store.get(h)
        assert cf.feature_total == 0
        assert cf.text_count == 1
        assert cf.stamp == 7

    def test_handles_unique_and_stamps_increase(self):
        store = ClusterStore()
        h1 = store.create_cluster(tv({"a": 1}), stamp=1)
        h2 = store.create_cluster(tv({"a": 1}), stamp=2)
        assert h1 != h2
        assert store.get(h2).stamp > store.get(h1).stamp

    def test_non_monotone_stamp_rejected(self):
        store = ClusterStore()
        store.create_cluster(tv({"a": 1}), stamp=5)
        with pytest.raises(ValueError):
            store.create_cluster(tv({"b": 1}), stamp=5)


class TestAddText:
    def test_additivity(self):
        store = ClusterStore()
        h = store.create_cluster(tv({"ai": 2}), stamp=1)
        store.add_text(h, tv({"ai": 1, "nlp": 1}))
        cf = store.get(h)
        assert cf.features == {"ai": 3, "nlp": 1}
        assert cf.feature_total == 4
        assert cf.text_count == 2

    def test_adding_same_text_twice_doubles_contribution(self):
        store = ClusterStore()
        h = store.create_cluster(tv({"x": 1}), stamp=1)
        t = tv({"a": 2, "b": 1})
        store.add_text(h, t)
        store.add_text(h, t)
        cf = store.get(h)
        assert cf.features == {"x": 1, "a": 4, "b": 2}
        assert cf.feature_total == 1 + 2 * 3
        assert cf.text_count == 3

    def test_stamp_unchanged_without_new_stamp(self):
        store = ClusterStore()
        h = store.create_cluster(tv({"a": 1}), stamp=3)
        store.add_text(h, tv({"a": 1}))
        assert store.get(h).stamp == 3

    def test_restamp(self):
        store = ClusterStore()
        h = store.create_cluster(tv({"a": 1}), stamp=1)
        store.add_text(h, tv({"a": 1}), new_stamp=2)
        assert store.get(h).stamp == 2
        assert store.max_stamp == 2

    def test_unknown_handle_is_hard_error(self):
        store = ClusterStore()
        with pytest.raises(KeyError):
            store.add_text(99, tv({"a": 1}))


class TestDelete:
    def test_delete_returns_cf_and_excludes_from_stats(self):
        store = ClusterStore()
        h1 = store.create_cluster(tv({"a": 1}), stamp=1)
        store.create_cluster(tv({"b": 1}), stamp=2)
        cf = store.delete_cluster(h1)
        assert cf.handle == h1
        assert cf.features == {"a": 1}
        assert store.live_count == 1
        assert store.stats().stamp_mean == 2.0

    def test_retired_handle_errors(self):
        store = ClusterStore()
        h = store.create_cluster(tv({"a": 1}), stamp=1)
        store.create_cluster(tv({"b": 1}), stamp=2)
        store.delete_cluster(h)
        with pytest.raises(KeyError):
            store.add_text(h, tv({"a": 1}))
        with pytest.raises(KeyError):
            store.delete_cluster(h)

    def test_delete_sole_cluster_empties_store(self):
        store = ClusterStore()
        h = store.create_cluster(tv({"a": 1}), stamp=1)
        store.delete_cluster(h)
        assert store.live_count == 0
        with pytest.raises(ValueError):
            store.stats()

    def test_deleted_text_accounting(self):
        store = ClusterStore()
        h = store.create_cluster(tv({"a": 1}), stamp=1)
        store.add_text(h, tv({"a": 1}))
        store.create_cluster(tv({"b": 1}), stamp=2)
        store.delete_cluster(h)
        assert store.texts_deleted == 2
        assert store.clusters_deleted == 1
        assert store.live_text_count == 1


class TestStats:
    def test_worked_example(self):
        store = ClusterStore()
        h1 = store.create_cluster(tv({"a": 1}), stamp=1)
        h2 = store.create_cluster(tv({"b": 1}), stamp=2)
        h3 = store.create_cluster(tv({"c": 1}), stamp=3)
        # sizes become {1, 1, 4}
        for _ in range(3):
            store.add_text(h3, tv({"c": 1}))
        st = store.stats()
        assert st.stamp_mean == pytest.approx(2.0)
        assert st.stamp_stddev == pytest.approx(math.sqrt(2 / 3), abs=1e-12)
        assert st.size_mean == pytest.approx(2.0)
        assert st.size_stddev == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_single_cluster_has_zero_stddevs(self):
        store = ClusterStore()
        store.create_cluster(tv({"a": 1}), stamp=9)
        st = store.stats()
        assert st.stamp_stddev == 0.0
        assert st.size_stddev == 0.0

    def test_empty_store_errors(self):
        with pytest.raises(ValueError):
            ClusterStore().stats()


def test_feature_total_matches_histogram_over_random_updates():
    import random

    rng = random.Random(5)
    store = ClusterStore()
    stamp = 0
    handles = []
    added = 0
    for _ in range(300):
        feats = {f"f{rng.randint(0, 20)}": rng.randint(1, 3) for _ in range(rng.randint(0, 4))}
        stamp += 1
        if handles and rng.random() < 0.7:
            store.add_text(rng.choice(handles), tv(feats), new_stamp=stamp)
        else:
            handles.append(store.create_cluster(tv(feats), stamp))
        added += 1
    assert store.live_text_count == added
    for cf in store.live():
        assert cf.feature_total == sum(cf.features.values())
        assert all(c >= 1 for c in cf.features.values())
    # The globally maximal stamp belongs to the most recently touched cluster.
    assert max(cf.stamp for cf in store.live()) == store.max_stamp
