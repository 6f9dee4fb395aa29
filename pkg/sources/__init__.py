"""Polynomial sources package."""
from sources.box_source import BoxSource
from sources.family_source import FamilySource
from sources.reference_corpus import ReferenceCorpus

__all__ = [
    "BoxSource",
    "FamilySource",
    "ReferenceCorpus",
]
