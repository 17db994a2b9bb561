"""Online leasing algorithms for (connected) dominating sets.

Library layout:

- ``leases``       lease catalogs, slot alignment, triplets
- ``graphs``       validated undirected connected graphs
- ``permits``      deterministic parking-permit algorithm + exact DP oracle
- ``hst``          random hierarchical tree embedding of the graph metric
- ``steiner``      online Steiner forest leasing on the embedded tree
- ``ocdsl``        the two-phase randomized connected-dominating-set leaser
- ``primal_dual``  deterministic primal-dual dominating-set leaser
- ``oracle``       feasibility verifier and exact offline optima (desk scale)
- ``generators``   instance generators, including adversarial patterns
- ``harness``      seeded experiment runner, records, reports
- ``cli``          the ``leaselab`` command line front end
"""

__version__ = "0.1.0"
