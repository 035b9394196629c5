"""
Verify an emitted solution file

Reloads a JSON solution document (or a list of them) written by
`cli.py --output json`, rebuilds each exact series and checks that the
given operator annihilates it on the series' window of validity.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from algebra import GeneralizedSeries
from emitters import Document, series_from_document
from errors import EulerOdeError, ResidualNonzero, VerificationError
from operators import LinDiffOp
from op_parser import operator_from_string
from series_solver import residual

logger = logging.getLogger(__name__)


def load_documents(path: str) -> List[Document]:
    """
    Read a solution file.

    Raises:
        VerificationError: the file is missing or is not JSON
    """
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise VerificationError(f"cannot read solution file {path}: {exc}") from None
    docs = data if isinstance(data, list) else [data]
    if not docs or not all(isinstance(d, dict) for d in docs):
        raise VerificationError(f"{path} holds no solution documents")
    return docs


def verify_document(doc: Document, op: LinDiffOp) -> GeneralizedSeries:
    """Return the rebuilt series; raise ResidualNonzero if op does not annihilate it."""
    series = series_from_document(doc)
    if series.is_zero():
        raise VerificationError("solution document has no terms")
    check = residual(op, series)
    if not check.is_zero():
        raise ResidualNonzero(check, f"solution with base exponent {series.base}")
    logger.info("verified solution x^%s with %d terms", series.base, len(series.terms))
    return series


def verify_file(path: str, src: str, bindings: Optional[Dict[str, Fraction]] = None,
                free: Optional[str] = None) -> List[GeneralizedSeries]:
    """Parse src, load path and verify every document in it."""
    op = operator_from_string(src, bindings, free)
    return [verify_document(doc, op) for doc in load_documents(path)]


def main():
    parser = argparse.ArgumentParser(description="Re-certify an emitted solution file")
    parser.add_argument("solution", help="JSON file written by cli.py --output json")
    parser.add_argument("operator", help="operator the solution should satisfy")
    parser.add_argument("--free", default=None, help="the symbolic parameter, if any")
    args = parser.parse_args()

    print("Solution Verification")
    print("=====================\n")
    try:
        solutions = verify_file(args.solution, args.operator, free=args.free)
    except EulerOdeError as exc:
        print(f"✗ {exc}")
        sys.exit(exc.exit_code)
    for s in solutions:
        print(f"✓ y = {s}")


if __name__ == "__main__":
    main()
