"""Domain types: process terms, transition systems and policies."""
from app.models.lts import CAction, CanonicalForm, Edge, Lts, Strategy, Ternary, Transition
from app.models.policy import Policy
from app.models.terms import (
    STOP,
    TAU,
    Action,
    ActionKind,
    Bang,
    Defs,
    Hide,
    Ident,
    Par,
    Prefix,
    Process,
    Restrict,
    Stop,
    Sum,
)

__all__ = [
    # Terms
    "Action",
    "ActionKind",
    "TAU",
    "Process",
    "Stop",
    "STOP",
    "Prefix",
    "Bang",
    "Sum",
    "Par",
    "Restrict",
    "Hide",
    "Ident",
    "Defs",
    # Transition systems
    "Transition",
    "CAction",
    "CanonicalForm",
    "Edge",
    "Lts",
    "Strategy",
    "Ternary",
    # Policies
    "Policy",
]
