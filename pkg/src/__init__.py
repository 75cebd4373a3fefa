"""
syncmdp - synchronizing objectives for Markov decision processes.

Modules:
    mdp: Exact model types, the Pre operator, graphs and qualitative reachability
    sync: Eventually, weakly and strongly synchronizing deciders and strategies
    generators: Transformations, reductions, families and example models
    validation: Support-graph oracle, exact simulator, witness re-verification
    cli: Model file codec and the syncmdp command line
    utils: Settings loading and batch reports
"""
