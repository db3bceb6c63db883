"""Process algebra with precedence-based scheduling and clocks."""
