"""Regenerate h2_sto3g.json: RHF molecular-orbital integrals of H2 in STO-3G."""
import json

import numpy as np
import pyscf
from pyscf import ao2mo, fci, gto, scf

GEOMETRY = "H 0 0 0; H 0 0 0.7414"

mol = gto.M(atom=GEOMETRY, basis="sto-3g", unit="angstrom")
mf = scf.RHF(mol).run(conv_tol=1e-12, verbose=0)
c = mf.mo_coeff
n = c.shape[1]
h = c.T @ mf.get_hcore() @ c
g = ao2mo.restore(1, ao2mo.kernel(mol, c), n)  # (pq|rs), chemists' order
e_fci = fci.FCI(mf).kernel()[0]

out = {
    "n_orbitals": n,
    "n_electrons": int(mol.nelectron),
    "e_nuc": float(mol.energy_nuc()),
    "h": [float(x) for x in h.reshape(-1)],
    "g": [float(x) for x in g.reshape(-1)],
    "geometry": f"{GEOMETRY} (angstrom), sto-3g, RHF orbitals, pyscf {pyscf.__version__}",
    "reference_energies": {"hf": float(mf.e_tot), "fci": float(e_fci)},
}
with open("h2_sto3g.json", "w") as f:
    json.dump(out, f, indent=2)
    f.write("\n")
print(out["reference_energies"])
