"""Python access to the Chord ring-maintenance checker."""

import json

from . import _core

ParseError = _core.ParseError
EventNotEnabled = _core.EventNotEnabled
AssumptionBreach = _core.AssumptionBreach


def _text(net):
    return net if isinstance(net, str) else json.dumps(net)


def _rules(rules):
    return "" if rules is None else json.dumps(rules)


def init_network(base, m=6, r=2):
    """Ideal ring over r + 1 base identifiers, as a network dict."""
    return json.loads(_core.init_network(list(base), m, r))


def enabled_events(net, joiners=(), rules=None):
    return json.loads(_core.enabled_events(_text(net), list(joiners), _rules(rules)))


def apply_event(net, event, rules=None):
    return json.loads(_core.apply_event(_text(net), json.dumps(event), _rules(rules)))


def state_report(net):
    """Conjuncts, ideal flag, total error and ring structure of a network."""
    return json.loads(_core.state_report(_text(net)))


def export_dot(net):
    return _core.export_dot(_text(net))


def check(lemma, n=4, r=(2,), mode="exhaustive", samples=1000, seed=1):
    return json.loads(_core.check(lemma, n, list(r), mode, samples, seed))


def simulate(r=2, churn_steps=100, seed=1, max_nodes=20):
    out = dict(_core.simulate(r, churn_steps, seed, max_nodes))
    out["final"] = json.loads(out["final"])
    return out


def replay(path):
    """Returns (status, messages); status 0 means every expectation held."""
    status, messages = _core.replay(str(path))
    return status, list(messages)


__all__ = [
    "AssumptionBreach",
    "EventNotEnabled",
    "ParseError",
    "apply_event",
    "check",
    "enabled_events",
    "export_dot",
    "init_network",
    "replay",
    "simulate",
    "state_report",
]
