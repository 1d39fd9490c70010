# Tests for the Kummer/Enriques verifier
