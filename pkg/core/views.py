from __future__ import annotations

import logging
from collections.abc import Callable

from django.http import HttpRequest, HttpResponse, JsonResponse
from django.views.decorators.http import require_GET

from dynamics.conv_dynamics import characteristic_sequence, check_sequence, markov_graph
from dynamics.exceptions import DynamicsError
from dynamics.f2_linalg import adjacency_matrix, char_poly, min_poly
from dynamics.perm_core import AnyPermutation, CyclicPermutation, as_cyclic, parse_permutation

logger = logging.getLogger(__name__)

PermutationView = Callable[[HttpRequest, AnyPermutation], HttpResponse]


def health_check(request: HttpRequest) -> JsonResponse:
    return JsonResponse({"status": "ok"})


def _with_permutation(view: PermutationView) -> Callable[[HttpRequest], HttpResponse]:
    """Parse ``?perm=`` (degree ≥ 2) and turn domain errors into 400 JSON responses."""

    @require_GET
    def wrapper(request: HttpRequest) -> HttpResponse:
        text = request.GET.get("perm", "")
        if not text.strip():
            return JsonResponse({"error": "missing perm parameter"}, status=400)
        try:
            p = parse_permutation(text)
            if p.degree < 2:
                return JsonResponse({"error": "degree must be at least 2"}, status=400)
            return view(request, p)
        except DynamicsError as exc:
            logger.debug("Rejected perm=%r: %s", text, exc)
            return JsonResponse({"error": str(exc)}, status=400)

    wrapper.__name__ = view.__name__
    return wrapper


@_with_permutation
def charseq(request: HttpRequest, p: AnyPermutation) -> HttpResponse:
    f: CyclicPermutation = as_cyclic(p)
    sequence = characteristic_sequence(f)
    return JsonResponse(
        {
            "perm": f.notation(),
            "raw": list(sequence.raw),
            "sorted": list(sequence.sorted),
            "lemma": "pass" if check_sequence(sequence).passed else "violation",
        }
    )


@_with_permutation
def matrix(request: HttpRequest, p: AnyPermutation) -> HttpResponse:
    t = adjacency_matrix(p)
    return JsonResponse({"rows": t.to_strings(), "charpoly": str(char_poly(t)), "minpoly": str(min_poly(t))})


@_with_permutation
def graph(request: HttpRequest, p: AnyPermutation) -> HttpResponse:
    return HttpResponse(markov_graph(p).to_dot(), content_type="text/vnd.graphviz")
