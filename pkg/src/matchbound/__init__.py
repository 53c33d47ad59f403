"""Exact ell-matching counting, entropy counting bounds, correspondence and
proof-step audits, and seeded conjecture-search campaigns."""

from .bounds import (BoundEntry, BoundReport, binary_entropy, bound_report,
                     bregman_bound, cgt_bound, elementary_symmetric,
                     elementary_symmetric_log, genminc_bound, log2_int, log_ratio,
                     phi_wild, psi, reports_to_csv, thm_bipartite_bound,
                     thm_dregular_bound, thm_general_bound, umc_extremal_main_term,
                     wild_bound)
from .campaigns import (CampaignConfig, CampaignReport, Violation, run_campaign,
                        run_genminc_campaign, run_umc_campaign)
from .correspondence import (AuditReport, UnionPattern, count_pair_decompositions,
                             enumerate_matchings, multiset_union_classify,
                             project_cover_matching, verify_fibers)
from .counting import (MarginalTable, MaskProfiler, kdd_profile, matching_marginals,
                       matching_profile, matching_profile_bruteforce,
                       profile_convolution, profile_from_json, profile_to_json,
                       umc_extremal_profile)
from .errors import CapExceeded, ParseError
from .graphs import (BipartiteGraph, Graph, Multigraph, as_bipartite,
                     bipartite_double_cover, complete_bipartite, cycle_graph,
                     disjoint_union, emit_bipartite, emit_edge_list, emit_graph6,
                     make_umc_extremal, parse_bipartite, parse_edge_list,
                     parse_graph6, random_bipartite, random_graph, random_regular)
from .prooflab import (ChainAudit, DistributionAudit, gx_step_audit,
                       inequality_chain_audit, middle_step_audit, rk_formula_audit,
                       step_refinement_audit, tiny_bipartite_catalog,
                       zx_distribution_audit)

__version__ = "0.1.0"
