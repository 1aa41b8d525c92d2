"""ringforge: ring signatures over NTRU lattices and commit-and-open proofs.

Subpackages by concern:

- ``distmath``  -- statistical distance / Renyi / KL toolkit for finite distributions
- ``ring``      -- arithmetic in Z_q[X]/(X^M+1) and hashing into the ring
- ``lattice``   -- discrete Gaussian samplers, NTRU trapdoor generation, Klein sampler
- ``rpsf``      -- ring preimage-sampleable trapdoor function over NTRU keys
- ``sigma``     -- commit-and-open sigma protocol for graph 3-coloring
- ``ringsig``   -- the two ring-signature constructions (trapdoor-based and AOS)
- ``games``     -- executable unforgeability / anonymity games and extraction demo
- ``bounds``    -- concrete-security bound calculator
- ``oraclelab`` -- numerical experiments on quantum oracle distribution switching
- ``cli``       -- command-line front end
"""

__version__ = "0.1.0"
