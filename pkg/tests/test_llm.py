import logging

import pytest

from tbrl.assets import read_asset
from tbrl.llm import (
    Cassette,
    CassetteExhausted,
    CassetteMismatch,
    CassetteRecorder,
    ChatClient,
    CompletionRequest,
    MissingPlaceholder,
    ServiceError,
    TokenUsage,
    TransportResult,
    extract_code_blocks,
    few_shot_pddl_examples,
    load_template,
    usage_total,
)


def canned_transport(responses):
    queue = list(responses)

    def transport(request):
        item = queue.pop(0)
        if isinstance(item, Exception):
            raise item
        return TransportResult(text=item, usage=TokenUsage(100, 50), latency_ms=7)

    return transport


# --- templates -------------------------------------------------------------------


def test_render_abstraction_prompt_embeds_few_shots():
    template = load_template("generate_abstractions")
    few_shot = few_shot_pddl_examples()
    prompt = template.render(
        domain_description="reach the goal",
        few_shot_pddl_examples=few_shot,
        raw_state="avatar: [[1,1]]",
        current_domain="",
    )
    for asset in ("few_shot_1.pddl", "few_shot_2.pddl", "few_shot_3.pddl"):
        assert read_asset("pddl", asset).strip() in prompt
    assert "{" not in prompt.replace("{}", "")  # no unresolved placeholders


def test_render_missing_placeholder():
    template = load_template("generate_abstractions")
    with pytest.raises(MissingPlaceholder):
        template.render(domain_description="x")


def test_transfer_template_phrase():
    template = load_template("transfer_problem")
    prompt = template.render(
        few_shot_pddl_examples="",
        domain_file="(define (domain movement))",
        raw_state="{}",
        mission="reach avatar goal",
        domain_description="",
    )
    assert "generate the problem file for this" in prompt


@pytest.mark.parametrize(
    "name,expected",
    [
        (
            "generate_abstractions",
            {"domain_description", "few_shot_pddl_examples", "raw_state", "current_domain"},
        ),
        (
            "generate_classifiers",
            {"domain_file", "problem_file", "raw_state", "world_model", "game_description"},
        ),
        (
            "transfer_problem",
            {"few_shot_pddl_examples", "domain_file", "raw_state", "mission", "domain_description"},
        ),
        (
            "generate_world_model",
            {
                "domain_description",
                "current_state",
                "actions_set",
                "num_random_actions",
                "errors_from_world_model",
                "utils",
            },
        ),
        (
            "revise_world_model",
            {"domain_description", "current_model", "mismatches", "observed_transitions", "utils"},
        ),
    ],
)
def test_template_placeholders(name, expected):
    assert load_template(name).placeholders == expected


def test_code_emitting_templates_use_wmdsl_fence():
    for name in ("generate_classifiers", "generate_world_model", "revise_world_model"):
        assert "```wmdsl" in load_template(name).body
    for name in ("generate_abstractions", "transfer_problem"):
        assert "```pddl" in load_template(name).body


# --- extraction --------------------------------------------------------------------


def test_extract_single_block():
    text = "Here you go:\n```pddl\n(define (domain d))\n```\nDone."
    assert extract_code_blocks(text, "pddl") == ["(define (domain d))"]


def test_extract_two_blocks_in_order():
    text = "```pddl\nDOMAIN\n```\nand\n```pddl\nPROBLEM\n```"
    assert extract_code_blocks(text, "pddl") == ["DOMAIN", "PROBLEM"]


def test_extract_ignores_other_tags():
    text = "```python\nx = 1\n```\n```wmdsl\ny = 2\n```"
    assert extract_code_blocks(text, "wmdsl") == ["y = 2"]


def test_extract_prose_only():
    assert extract_code_blocks("no code here, sorry", "pddl") == []


def test_extract_unclosed_block_warns(caplog):
    with caplog.at_level(logging.WARNING):
        blocks = extract_code_blocks("```wmdsl\nline1\nline2", "wmdsl")
    assert blocks == ["line1\nline2"]
    assert any("unclosed" in rec.message for rec in caplog.records)


def test_extract_nested_fence_is_content():
    text = "```wmdsl\nouter\n```python\ninner\n```\n"
    assert extract_code_blocks(text, "wmdsl") == ["outer\n```python\ninner"]


# --- client ------------------------------------------------------------------------


def test_record_then_replay_round_trip(tmp_path):
    path = tmp_path / "run.jsonl"
    recorder = CassetteRecorder(path)
    client = ChatClient(transport=canned_transport(["one", "two", "three"]), recorder=recorder)
    requests = [CompletionRequest.user(f"prompt {i}") for i in range(3)]
    for request in requests:
        client.complete(request)
    recorder.close()

    cassette = Cassette.load(path)
    assert cassette.check_trailer()
    replayer = ChatClient(cassette=cassette)
    texts = [replayer.complete(r).response_text for r in requests]
    assert texts == ["one", "two", "three"]
    with pytest.raises(CassetteExhausted):
        replayer.complete(requests[0])


def test_replay_hash_mismatch(tmp_path):
    path = tmp_path / "run.jsonl"
    recorder = CassetteRecorder(path)
    client = ChatClient(transport=canned_transport(["one"]), recorder=recorder)
    client.complete(CompletionRequest.user("recorded prompt"))
    recorder.close()

    replayer = ChatClient(cassette=Cassette.load(path))
    with pytest.raises(CassetteMismatch):
        replayer.complete(CompletionRequest.user("different prompt"))


def test_hash_ignores_sampling_params(tmp_path):
    path = tmp_path / "run.jsonl"
    recorder = CassetteRecorder(path)
    client = ChatClient(transport=canned_transport(["one"]), recorder=recorder)
    client.complete(CompletionRequest.user("same prompt"))
    recorder.close()

    replayer = ChatClient(cassette=Cassette.load(path))
    warm = CompletionRequest(messages=(("user", "same prompt"),), temperature=0.9)
    assert replayer.complete(warm).response_text == "one"


def test_retry_on_injected_failure(caplog):
    transport = canned_transport([ConnectionError("503"), "recovered"])
    client = ChatClient(transport=transport, max_retries=2, backoff=0.0)
    with caplog.at_level(logging.WARNING):
        exchange = client.complete(CompletionRequest.user("hi"))
    assert exchange.response_text == "recovered"
    assert exchange.retries == 1
    assert any("attempt 1 failed" in rec.message for rec in caplog.records)


def test_retries_exhausted():
    transport = canned_transport([ConnectionError("a"), ConnectionError("b"), ConnectionError("c")])
    client = ChatClient(transport=transport, max_retries=2, backoff=0.0)
    with pytest.raises(ServiceError):
        client.complete(CompletionRequest.user("hi"))


def test_sequence_numbers_increase():
    client = ChatClient(transport=canned_transport(["a", "b"]))
    first = client.complete(CompletionRequest.user("1"))
    second = client.complete(CompletionRequest.user("2"))
    assert second.seq > first.seq


# --- accounting ----------------------------------------------------------------------


def test_usage_zero_calls():
    assert usage_total([]).total.total == 0


def test_usage_arithmetic():
    def transport(request):
        mapping = {"a": TokenUsage(100, 50), "b": TokenUsage(200, 25)}
        return TransportResult(text="x", usage=mapping[request.messages[0][1]])

    client = ChatClient(transport=transport)
    client.complete(CompletionRequest.user("a"), purpose="abstraction", level="one")
    client.complete(CompletionRequest.user("b"), purpose="world_model", level="one")
    summary = usage_total(client.log)
    assert summary.total.total == 375
    assert summary.purpose_total("abstraction") == 150
    assert summary.purpose_total("world_model", level="one") == 225
    assert summary.by_level["one"].total == 375


def test_cassette_totals_match_records(tmp_path):
    path = tmp_path / "run.jsonl"
    recorder = CassetteRecorder(path)
    client = ChatClient(transport=canned_transport(["x", "y"]), recorder=recorder)
    client.complete(CompletionRequest.user("1"))
    client.complete(CompletionRequest.user("2"))
    recorder.close()
    cassette = Cassette.load(path)
    assert cassette.total_usage() == TokenUsage(200, 100)
    assert cassette.check_trailer()
