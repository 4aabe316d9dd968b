"""Exact lattice computations for deciding which groups ``H^m / C`` are
stably Cayley: integer linear algebra, finite matrix groups, Γ-lattices,
group cohomology and Tate–Shafarevich groups, root data, explicit
obstruction witnesses and the classifier itself."""

__version__ = "0.1.0"
