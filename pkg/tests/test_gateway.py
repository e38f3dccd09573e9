"""Gateway semantics: scripted mocks, retry/backoff, concurrency atomicity."""

import random
import threading
from concurrent.futures import ThreadPoolExecutor

import pytest

from ethically.gateway import (
    DEFAULT_TIMEOUT_S,
    ErrorKind,
    KeyedMockProvider,
    MockProvider,
    ProviderError,
    ProviderRequest,
    RetryPolicy,
    backoff_delay,
    with_retry,
)
from helpers import GOLDEN_REPORT_PATH


def request(**overrides) -> ProviderRequest:
    base = dict(
        system_text="system instructions",
        user_text="user message",
        model_id="test-model",
    )
    base.update(overrides)
    return ProviderRequest(**base)


class TestProviderRequest:
    def test_empty_texts_rejected(self):
        with pytest.raises(ValueError):
            ProviderRequest(system_text="", user_text="x", model_id="m")

    def test_request_id_autogenerated_and_unique(self):
        a, b = request(), request()
        assert a.request_id and b.request_id
        assert a.request_id != b.request_id

    def test_max_output_tokens_positive(self):
        with pytest.raises(ValueError):
            request(max_output_tokens=0)


class TestMockProvider:
    def test_scripted_text_returned(self):
        golden = GOLDEN_REPORT_PATH.read_text(encoding="utf-8")
        mock = MockProvider([golden])
        result = mock.complete(request())
        assert result.raw_text == golden
        assert result.attempts == 1

    def test_last_entry_repeats_after_exhaustion(self):
        mock = MockProvider(["only"])
        texts = [mock.complete(request()).raw_text for _ in range(3)]
        assert texts == ["only", "only", "only"]

    def test_error_then_success_in_order(self):
        mock = MockProvider([ProviderError(ErrorKind.OVERLOADED), "fine"])
        with pytest.raises(ProviderError):
            mock.complete(request())
        assert mock.complete(request()).raw_text == "fine"

    def test_empty_script_rejected(self):
        with pytest.raises(ValueError):
            MockProvider([])

    def test_concurrent_callers_observe_script_atomically(self):
        # Counter oracle: N distinct entries, N concurrent callers; every
        # entry must be served exactly once, none duplicated or skipped.
        n = 32
        mock = MockProvider([f"entry-{i}" for i in range(n)])
        barrier = threading.Barrier(n)

        def call(_):
            barrier.wait()
            return mock.complete(request()).raw_text

        with ThreadPoolExecutor(max_workers=n) as pool:
            seen = list(pool.map(call, range(n)))
        assert sorted(seen) == sorted(f"entry-{i}" for i in range(n))
        assert mock.calls == n


class TestKeyedMockProvider:
    def test_picks_response_by_user_text_key(self):
        mock = KeyedMockProvider({"alpha": "A", "beta": "B"})
        assert mock.complete(request(user_text="...alpha...")).raw_text == "A"
        assert mock.complete(request(user_text="beta inside")).raw_text == "B"

    def test_no_match_raises_without_default(self):
        mock = KeyedMockProvider({"alpha": "A"})
        with pytest.raises(ProviderError):
            mock.complete(request(user_text="gamma"))


class TestRetry:
    def test_overloaded_twice_then_success_attempts_three(self):
        mock = MockProvider(
            [
                ProviderError(ErrorKind.OVERLOADED),
                ProviderError(ErrorKind.OVERLOADED),
                "recovered",
            ]
        )
        result = with_retry(mock, request(), RetryPolicy(max_attempts=3), sleep=lambda _: None)
        assert result.raw_text == "recovered"
        assert result.attempts == 3
        assert mock.calls == 3

    def test_auth_failure_never_retried(self):
        mock = MockProvider([ProviderError(ErrorKind.AUTH_FAILURE), "never"])
        with pytest.raises(ProviderError) as excinfo:
            with_retry(mock, request(), RetryPolicy(max_attempts=5), sleep=lambda _: None)
        assert excinfo.value.kind is ErrorKind.AUTH_FAILURE
        assert excinfo.value.attempts == 1
        assert mock.calls == 1

    def test_bad_request_never_retried(self):
        mock = MockProvider([ProviderError(ErrorKind.BAD_REQUEST)])
        with pytest.raises(ProviderError) as excinfo:
            with_retry(mock, request(), sleep=lambda _: None)
        assert excinfo.value.attempts == 1

    def test_timeout_exhausts_retry_budget(self):
        mock = MockProvider([ProviderError(ErrorKind.TIMEOUT)])
        with pytest.raises(ProviderError) as excinfo:
            with_retry(mock, request(), RetryPolicy(max_attempts=3), sleep=lambda _: None)
        assert excinfo.value.kind is ErrorKind.TIMEOUT
        assert excinfo.value.attempts == 3
        assert mock.calls == 3

    def test_single_attempt_policy_equals_plain_complete(self):
        mock = MockProvider([ProviderError(ErrorKind.OVERLOADED), "later"])
        with pytest.raises(ProviderError):
            with_retry(mock, request(), RetryPolicy(max_attempts=1), sleep=lambda _: None)
        assert mock.calls == 1

    def test_retryable_taxonomy(self):
        assert ProviderError(ErrorKind.OVERLOADED).retryable
        assert ProviderError(ErrorKind.TIMEOUT).retryable
        assert ProviderError(ErrorKind.TRANSPORT_FAILURE).retryable
        assert not ProviderError(ErrorKind.AUTH_FAILURE).retryable
        assert not ProviderError(ErrorKind.BAD_REQUEST).retryable

    def test_delays_within_bounds_and_nondecreasing_in_expectation(self):
        # Simulate 100 runs with a recording sleep and a fake clock; each
        # step's delay must stay within [base_delay, max_delay], and mean
        # delay per step must not decrease.
        policy = RetryPolicy(max_attempts=5, base_delay=2.0, max_delay=30.0)
        per_step: dict[int, list[float]] = {1: [], 2: [], 3: [], 4: []}
        for seed in range(100):
            rng = random.Random(seed)
            delays: list[float] = []
            mock = MockProvider([ProviderError(ErrorKind.OVERLOADED)])
            with pytest.raises(ProviderError):
                with_retry(mock, request(), policy, sleep=delays.append, rng=rng)
            assert len(delays) == 4
            for step, delay in enumerate(delays, start=1):
                assert policy.base_delay <= delay <= policy.max_delay
                per_step[step].append(delay)
        means = [sum(per_step[s]) / len(per_step[s]) for s in sorted(per_step)]
        assert all(b >= a for a, b in zip(means, means[1:]))

    def test_backoff_caps_at_max_delay(self):
        policy = RetryPolicy(max_attempts=10, base_delay=2.0, max_delay=30.0)
        rng = random.Random(0)
        assert backoff_delay(policy, 1, rng) == 2.0
        for attempt in range(2, 10):
            assert 2.0 <= backoff_delay(policy, attempt, rng) <= 30.0


class TestDefaults:
    def test_default_policy_values(self):
        policy = RetryPolicy()
        assert policy.max_attempts == 3
        assert policy.base_delay == 2.0
        assert policy.max_delay == 30.0

    def test_default_timeout_covers_observed_latency_envelope(self):
        assert DEFAULT_TIMEOUT_S == 120.0
