"""Class numbers, genus searches and certified cutoffs for discriminants
with one class per genus."""

from .cutoff import (
    CutoffCertificate,
    PrimorialTable,
    ci_exponent,
    find_cutoff,
    min_genus_bound,
    nth_prime,
    primorial,
    verify_certificate,
)
from .forms import (
    Discriminant,
    GenusReport,
    QuadraticForm,
    class_number,
    compose,
    enumerate_reduced,
    genus_report,
    principal_form,
    reduce,
    search_ocpg,
    validate_discriminant,
)
from .intervals import Interval, Precision, Verdict, compare
from .lfunc import (
    PRESETS,
    BoundHypothesis,
    analytic_class_number,
    bound_check,
    character_sum,
    kronecker,
    l_one,
)

__version__ = "0.1.0"
