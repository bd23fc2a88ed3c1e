"""charpoly_lab: exact algebra and seeded Monte Carlo for characteristic
polynomials of random matrices over Z and over finite fields."""

__version__ = "0.1.0"
