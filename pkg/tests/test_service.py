"""Tests for the HTTP match service.

Matches run through `fastapi.testclient.TestClient`; timeouts use an
injected fake clock so nothing here sleeps.
"""

import json

import pytest
from fastapi.testclient import TestClient

from bidgame.match import parse_transcript, verify_transcript
from bidgame.service import create_app


class FakeClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now


@pytest.fixture()
def clock():
    return FakeClock()


@pytest.fixture()
def client(tmp_path, clock):
    app = create_app(tmp_path / "transcripts", timeout_seconds=120.0, clock=clock)
    with TestClient(app) as c:
        yield c


def create(client, **overrides):
    payload = {"game": "ttt", **overrides}
    response = client.post("/matches", json=payload)
    assert response.status_code == 201, response.text
    return response.json()


class TestCreate:
    def test_human_vs_bot_returns_one_token(self, client):
        body = create(client, seat_b="richman", match_id="hvb")
        assert body["match_id"] == "hvb"
        assert set(body["tokens"]) == {"A"}
        snapshot = body["snapshot"]
        assert snapshot["phase"] == "awaiting-bids"
        # The bot has already sealed its bid; only the fact, never the value.
        assert snapshot["bids_committed"] == {"A": False, "B": True}

    def test_hex_human_vs_mc_bot(self, client):
        body = create(client, game="hex:5", seat_b="mc-hex:500")
        assert set(body["tokens"]) == {"A"}
        assert body["snapshot"]["game"] == "hex:5"
        assert len(body["snapshot"]["board"]) == 25

    def test_bot_vs_bot_finishes_immediately(self, client):
        body = create(
            client,
            game="dag:@diamond",
            seat_a="richman",
            seat_b="random",
            alice_chips=2,
            bob_chips=0,
        )
        snapshot = body["snapshot"]
        assert body["tokens"] == {}
        assert snapshot["phase"] == "finished"
        assert snapshot["outcome"] == "alice_wins"
        assert snapshot["transcript_url"].endswith("/transcript")

    def test_rejections(self, client):
        for bad in (
            {"game": "checkers"},
            {"game": "dag:/etc/passwd"},  # path-backed games are not served
            {"game": "ttt", "seat_a": "alpha-zero"},
            {"game": "ttt", "seat_a": "script"},  # scripts are an offline feature
            {"game": "ttt", "seat_b": "mc-hex:100"},  # MC bot cannot play ttt
            {"game": "ttt", "star_holder": "C"},
            {"game": "ttt", "draw_policy": "coin-flip"},
        ):
            assert client.post("/matches", json=bad).status_code == 400, bad

    def test_duplicate_id_conflicts(self, client):
        create(client, match_id="dup")
        response = client.post("/matches", json={"game": "ttt", "match_id": "dup"})
        assert response.status_code == 409

    def test_unknown_match_404(self, client):
        assert client.get("/matches/nope").status_code == 404
        assert client.get("/matches/nope/transcript").status_code == 404

    def test_games_listing(self, client):
        body = client.get("/games").json()
        assert "ttt" in body["games"]
        assert "hex:5" in body["games"]
        assert "dag:@diamond" in body["games"]
        assert "richman" in body["agents"]


class TestBidAndMoveFlow:
    def start_humans(self, client, **overrides):
        body = create(client, seat_a="external", seat_b="external", **overrides)
        return body["match_id"], body["tokens"]["A"], body["tokens"]["B"]

    def test_full_round(self, client):
        match_id, tok_a, tok_b = self.start_humans(client, game="dag:@diamond")
        bid = client.post(f"/matches/{match_id}/bid", json={"token": tok_a, "amount": 60})
        assert bid.status_code == 200 and bid.json()["accepted"]
        snapshot = client.get(f"/matches/{match_id}").json()
        assert snapshot["bids_committed"] == {"A": True, "B": False}
        assert snapshot["current_round"] is None  # nothing revealed yet

        client.post(f"/matches/{match_id}/bid", json={"token": tok_b, "amount": 40})
        snapshot = client.get(f"/matches/{match_id}").json()
        assert snapshot["phase"] == "awaiting-move"
        assert snapshot["current_round"] == {"bid_a": "60", "bid_b": "40", "mover": "A"}
        assert snapshot["chips"]["display"] == "40*/160"

        # the auction loser may not move
        lose = client.post(f"/matches/{match_id}/move", json={"token": tok_b, "move": "bw"})
        assert lose.status_code == 403
        # the winner may not play the other side's edge
        wrong = client.post(f"/matches/{match_id}/move", json={"token": tok_a, "move": "bw"})
        assert wrong.status_code == 422
        done = client.post(f"/matches/{match_id}/move", json={"token": tok_a, "move": "aw"})
        assert done.status_code == 200 and done.json()["phase"] == "finished"

        snapshot = client.get(f"/matches/{match_id}").json()
        assert snapshot["outcome"] == "alice_wins"
        assert snapshot["past_rounds"] == [
            {
                "round": 1,
                "bid_a": "60",
                "bid_b": "40",
                "mover": "A",
                "chips": "40*/160",
                "move": "aw",
            }
        ]

    def test_double_bid_rejected_within_round(self, client):
        match_id, tok_a, _ = self.start_humans(client)
        client.post(f"/matches/{match_id}/bid", json={"token": tok_a, "amount": 5})
        for _ in range(2):  # deterministic rejection on resubmission
            again = client.post(f"/matches/{match_id}/bid", json={"token": tok_a, "amount": 6})
            assert again.status_code == 409

    def test_illegal_bid_allows_retry(self, client):
        match_id, tok_a, _ = self.start_humans(client)
        assert (
            client.post(f"/matches/{match_id}/bid", json={"token": tok_a, "amount": 101}).status_code
            == 422
        )
        assert (
            client.post(
                f"/matches/{match_id}/bid",
                json={"token": tok_a, "amount": 3, "include_star": True},
            ).status_code
            == 200
        )

    def test_bad_token_rejected(self, client):
        match_id, tok_a, _ = self.start_humans(client)
        bad = client.post(f"/matches/{match_id}/bid", json={"token": "f" * 32, "amount": 1})
        assert bad.status_code == 403

    def test_move_in_bid_phase_rejected(self, client):
        match_id, tok_a, _ = self.start_humans(client)
        response = client.post(f"/matches/{match_id}/move", json={"token": tok_a, "move": "b2"})
        assert response.status_code == 409

    def test_bot_answers_between_human_actions(self, client):
        body = create(client, game="dag:@diamond", seat_b="richman", match_id="vs-bot")
        tok = body["tokens"]["A"]
        # Bot sealed its bid at creation; our zero bid loses the auction to it.
        client.post("/matches/vs-bot/bid", json={"token": tok, "amount": 0})
        snapshot = client.get("/matches/vs-bot").json()
        # Bot won, moved instantly to its winning terminal: match over.
        assert snapshot["phase"] == "finished"
        assert snapshot["outcome"] == "bob_wins"
        assert len(snapshot["past_rounds"]) == 1
        assert snapshot["past_rounds"][0]["mover"] == "B"


class TestTranscriptEndpoint:
    def test_live_match_has_no_transcript_yet(self, client):
        body = create(client, match_id="live")
        assert client.get("/matches/live/transcript").status_code == 409

    def test_finished_transcript_parses_and_verifies(self, client, tmp_path):
        create(
            client,
            game="ttt",
            seat_a="random",
            seat_b="random",
            seed=7,
            match_id="bots",
        )
        text = client.get("/matches/bots/transcript").text
        transcript = parse_transcript(text)
        report = verify_transcript(transcript)
        assert report.ok, str(report)
        assert (tmp_path / "transcripts" / "bots.transcript").read_text() == text


class TestTimeouts:
    def test_idle_bidder_forfeits(self, client, clock):
        body = create(client, game="dag:@diamond", match_id="slow")
        tok_a = body["tokens"]["A"]
        client.post("/matches/slow/bid", json={"token": tok_a, "amount": 10})
        clock.now = 119.0
        assert client.get("/matches/slow").json()["phase"] == "awaiting-bids"
        clock.now = 121.0
        snapshot = client.get("/matches/slow").json()
        assert snapshot["phase"] == "finished"
        assert snapshot["forfeited"] == "B"  # the seat that never bid
        assert snapshot["outcome"] == "alice_wins"

    def test_action_resets_deadline(self, client, clock):
        body = create(client, game="dag:@diamond", match_id="steady")
        tok_a, tok_b = body["tokens"]["A"], body["tokens"]["B"]
        clock.now = 100.0
        client.post("/matches/steady/bid", json={"token": tok_a, "amount": 2})
        clock.now = 190.0  # 90 s after the last action: still inside the window
        snapshot = client.get("/matches/steady").json()
        assert snapshot["phase"] == "awaiting-bids"

    def test_idle_mover_forfeits(self, client, clock):
        body = create(client, game="dag:@diamond", match_id="frozen")
        tok_a, tok_b = body["tokens"]["A"], body["tokens"]["B"]
        client.post("/matches/frozen/bid", json={"token": tok_a, "amount": 9})
        client.post("/matches/frozen/bid", json={"token": tok_b, "amount": 1})
        assert client.get("/matches/frozen").json()["phase"] == "awaiting-move"
        clock.now = 500.0
        snapshot = client.get("/matches/frozen").json()
        assert snapshot["forfeited"] == "A"  # Alice won the auction, then stalled
        assert snapshot["outcome"] == "bob_wins"
        # the forfeit is persisted like any other finish
        text = client.get("/matches/frozen/transcript").text
        assert text.endswith("result bob_wins forfeit A\n")


class TestSecrecy:
    def test_snapshots_identical_for_different_sealed_bids(self, tmp_path, clock):
        captures = []
        for label, amount in (("one", 10), ("two", 90)):
            app = create_app(tmp_path / label, timeout_seconds=120.0, clock=clock)
            with TestClient(app) as c:
                created = create(c, match_id="sealed", seed=3)
                token = created["tokens"]["A"]
                c.post("/matches/sealed/bid", json={"token": token, "amount": amount})
                captures.append(c.get("/matches/sealed").content)
        # an observer cannot distinguish a sealed 10 from a sealed 90
        assert captures[0] == captures[1]

    def test_snapshot_never_contains_pending_amount(self, client):
        body = create(client, match_id="quiet")
        token = body["tokens"]["A"]
        client.post("/matches/quiet/bid", json={"token": token, "amount": 73})
        snapshot = client.get("/matches/quiet")
        assert b"73" not in snapshot.content
        parsed = snapshot.json()
        assert parsed["bids_committed"] == {"A": True, "B": False}


class TestSubscriptions:
    def read_events(self, client, match_id, limit):
        events = []
        with client.stream("GET", f"/matches/{match_id}/events") as stream:
            buffer = b""
            for chunk in stream.iter_bytes():
                buffer += chunk
                while b"\n\n" in buffer:
                    event, buffer = buffer.split(b"\n\n", 1)
                    if event.startswith(b":"):
                        continue  # keep-alive comment
                    events.append(event)
                    if len(events) >= limit:
                        return events
        return events

    def test_finished_match_stream_ends_with_transcript_ref(self, client):
        create(
            client,
            game="dag:@diamond",
            seat_a="richman",
            seat_b="random",
            alice_chips=2,
            bob_chips=0,
            match_id="over",
        )
        events = self.read_events(client, "over", limit=2)
        first = json.loads(events[0].split(b"data: ", 1)[1])
        assert first["phase"] == "finished"
        assert events[1].startswith(b"event: transcript")
        assert b"/matches/over/transcript" in events[1]

    def test_live_stream_follows_match_to_the_end(self, client):
        # The test client buffers streaming responses until the app finishes,
        # so a second client plays the match out from a worker thread while
        # this thread sits inside the stream request.
        import threading
        import time as time_module

        body = create(client, game="dag:@diamond", match_id="watchme")
        tok_a, tok_b = body["tokens"]["A"], body["tokens"]["B"]
        player = TestClient(client.app)

        def play():
            time_module.sleep(0.7)  # let the stream subscribe first
            player.post("/matches/watchme/bid", json={"token": tok_a, "amount": 8})
            player.post("/matches/watchme/bid", json={"token": tok_b, "amount": 3})
            player.post("/matches/watchme/move", json={"token": tok_a, "move": "aw"})

        worker = threading.Thread(target=play)
        worker.start()
        try:
            events = self.read_events(client, "watchme", limit=99)
        finally:
            worker.join()
        assert events[-1].startswith(b"event: transcript")
        snapshots = [json.loads(e.split(b"data: ", 1)[1]) for e in events[:-1]]
        assert snapshots[0]["phase"] == "awaiting-bids"
        assert snapshots[-1]["phase"] == "finished"
        assert snapshots[-1]["outcome"] == "alice_wins"
        assert "awaiting-move" in [s["phase"] for s in snapshots]

    def test_two_subscribers_see_identical_sequences(self, client):
        import queue as queue_module

        body = create(client, game="dag:@diamond", match_id="pair")
        tok_a, tok_b = body["tokens"]["A"], body["tokens"]["B"]
        service = client.app.state.service
        session = service.get("pair")
        q1, q2 = queue_module.Queue(), queue_module.Queue()
        with session.lock:
            session.subscribers += [q1, q2]
        client.post("/matches/pair/bid", json={"token": tok_a, "amount": 7})
        client.post("/matches/pair/bid", json={"token": tok_b, "amount": 2})
        client.post("/matches/pair/move", json={"token": tok_a, "move": "aw"})

        def drain(q):
            items = []
            while not q.empty():
                items.append(q.get())
            return items

        one, two = drain(q1), drain(q2)
        assert one == two
        assert len(one) >= 3  # two commits and a move, at least


class TestBrowserClientSupport:
    def test_cross_origin_requests_get_cors_headers(self, client):
        response = client.get("/games", headers={"Origin": "http://localhost:5173"})
        assert response.headers["access-control-allow-origin"] == "*"

    def test_static_ui_mount(self, tmp_path, clock):
        ui = tmp_path / "ui"
        ui.mkdir()
        (ui / "index.html").write_text("<!doctype html><title>bidgame</title>")
        app = create_app(tmp_path / "transcripts", timeout_seconds=120.0,
                         clock=clock, ui_dir=ui)
        with TestClient(app) as c:
            page = c.get("/")
            assert page.status_code == 200
            assert "bidgame" in page.text
            # API routes still win over the static mount
            assert "games" in c.get("/games").json()


class TestRestartRestore:
    def test_restart(self, tmp_path, clock):
        directory = tmp_path / "persist"
        app = create_app(directory, timeout_seconds=120.0, clock=clock)
        with TestClient(app) as c:
            create(c, game="ttt", seat_a="random", seat_b="random", seed=11, match_id="old")
            original_text = c.get("/matches/old/transcript").text
            original_state = c.get("/matches/old").content

        fresh = create_app(directory, timeout_seconds=120.0, clock=clock)
        with TestClient(fresh) as c:
            assert c.get("/matches/old/transcript").text == original_text
            snapshot = c.get("/matches/old").json()
            assert snapshot["phase"] == "finished"
            assert snapshot["outcome"] == json.loads(original_state)["outcome"]
            assert snapshot["past_rounds"] == json.loads(original_state)["past_rounds"]
            # restored matches accept no actions
            bid = c.post("/matches/old/bid", json={"token": "x" * 32, "amount": 1})
            assert bid.status_code == 403
