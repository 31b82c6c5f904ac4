"""Probability nodes: expansion, algebra, statement forms, prenexation and schemas."""
from .expand import outer_expand, inner_expand, leq_by_duality, expand_node, prob_gt, prob_lt
from .algebra import sum_outer_geq, sigma_additivity_statement
from .forms import ProbForm, ModulusSpec, detect_form, quantitative_interpretation, FORM1, FORM2, FORM3, OTHER
from .rewrite import Step, Justification, Side, LEDGER, prenex_rewrite, rewrite_chain, subformula_at, replace_at
from .schemas import SchemaInstance, instantiate_ub, instantiate_cc
from .modulus import ModulusTable, transform_modulus_equiv
