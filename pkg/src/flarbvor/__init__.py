"""flarbvor: combinatorial curve surgery on cubic plane graphs and
incremental Voronoi diagrams of sites in convex position."""

__version__ = "0.1.0"
