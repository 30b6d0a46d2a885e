#!/usr/bin/env python3
"""Regenerate the committed integral fixtures.

Requires PySCF (tested with 2.14). Writes FCIDUMP files, reference-energy
tables and orbital-energy tables under this directory. The Rust test suite
only reads the committed output; this script is never run by `cargo test`.

    python3 fixtures/generate.py
"""
import csv
import hashlib
import os

import numpy as np
from pyscf import ao2mo, cc, fci, gto, scf

HERE = os.path.dirname(os.path.abspath(__file__))
REF_HEADER = ["species", "basis", "geometry", "method", "total_energy", "correlation_energy"]


def h2(r):
    return f"H 0 0 0; H 0 0 {r}"


def h3p_tri(r):
    return f"H 0 0 0; H {r} 0 0; H {r / 2} {r * np.sqrt(3) / 2} 0"


def h3p_lin(r):
    return f"H 0 0 0; H {r} 0 0; H {2 * r} 0 0"


def h3p_ang(theta, r0=0.81):
    t = np.radians(theta)
    return f"H 0 0 0; H {r0} 0 0; H {r0 * np.cos(t)} {r0 * np.sin(t)} 0"


def diatomic(a, b):
    return lambda r: f"{a} 0 0 0; {b} 0 0 {r}"


def write_fcidump(path, norb, nelec, ms2, ecore, h1, eri, nfrozen=0, extra=""):
    tol = 1e-14
    with open(path, "w") as f:
        f.write(f" &FCI NORB={norb},NELEC={nelec},MS2={ms2},\n")
        f.write("  ORBSYM=" + "1," * norb + "\n")
        f.write(f"  ISYM=1,NFROZEN={nfrozen},{extra}\n")
        f.write(" &END\n")
        for i in range(norb):
            for j in range(i + 1):
                for k in range(norb):
                    for l in range(k + 1):
                        if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                            continue
                        v = eri[i, j, k, l]
                        if abs(v) > tol:
                            f.write(f"{v: .16e} {i + 1} {j + 1} {k + 1} {l + 1}\n")
        for i in range(norb):
            for j in range(i + 1):
                if abs(h1[i, j]) > tol:
                    f.write(f"{h1[i, j]: .16e} {i + 1} {j + 1} 0 0\n")
        f.write(f"{ecore: .16e} 0 0 0 0\n")


def run_point(atom, basis, charge, nfrozen):
    mol = gto.M(atom=atom, basis=basis, charge=charge, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    c = mf.mo_coeff
    norb = c.shape[1]
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), norb)
    ccsd = cc.CCSD(mf, frozen=nfrozen if nfrozen else None)
    ccsd.conv_tol = 1e-10
    ccsd.kernel()
    if nfrozen:
        # active-space FCI with the frozen-core effective Hamiltonian
        from pyscf import mcscf

        cas = mcscf.CASCI(mf, norb - nfrozen, mol.nelectron - 2 * nfrozen)
        cas.fcisolver.conv_tol = 1e-12
        e_fci = cas.kernel()[0]
    else:
        solver = fci.FCI(mf)
        solver.conv_tol = 1e-12
        e_fci = solver.kernel()[0]
    return dict(mol=mol, mf=mf, norb=norb, h1=h1, eri=eri, e_ccsd=ccsd.e_tot, e_fci=e_fci)



def scan(name, species, basis, charge, geom, grid, nfrozen=0, tz=False):
    out = os.path.join(HERE, name)
    os.makedirs(out, exist_ok=True)
    refs, orbs, index = [], [], []
    for x in grid:
        tag = f"{x:.4f}"
        p = run_point(geom(x), basis, charge, nfrozen)
        mol, mf = p["mol"], p["mf"]
        fname = f"{name}_{tag}.fcidump"
        write_fcidump(os.path.join(out, fname), p["norb"], mol.nelectron, mol.spin,
                      mol.energy_nuc(), p["h1"], p["eri"], nfrozen)
        index.append([species, basis, tag, fname])
        e_rhf = mf.e_tot
        refs.append([species, basis, tag, "rhf", f"{e_rhf:.12f}", ""])
        refs.append([species, basis, tag, "ccsd", f"{p['e_ccsd']:.12f}", f"{p['e_ccsd'] - e_rhf:.12f}"])
        refs.append([species, basis, tag, "fci", f"{p['e_fci']:.12f}", f"{p['e_fci'] - e_rhf:.12f}"])
        if tz:
            mt = gto.M(atom=geom(x), basis="cc-pvtz", charge=charge, verbose=0)
            mft = scf.RHF(mt)
            mft.conv_tol = 1e-12
            refs.append([species, "cc-pVTZ", tag, "rhf", f"{mft.kernel():.12f}", ""])
        for i, e in enumerate(mf.mo_energy):
            orbs.append([species, basis, tag, i, f"{e:.12f}"])
    with open(os.path.join(out, "index.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["species", "basis", "geometry", "file"])
        w.writerows(index)
    with open(os.path.join(out, "reference.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(REF_HEADER)
        w.writerows(refs)
    with open(os.path.join(out, "orbital_energies.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["species", "basis", "geometry", "orbital", "energy"])
        w.writerows(orbs)


def cbs_series():
    out = os.path.join(HERE, "cbs")
    os.makedirs(out, exist_ok=True)
    rows = []
    for x, basis in [(2, "cc-pVDZ"), (3, "cc-pVTZ"), (4, "cc-pVQZ"), (5, "cc-pV5Z")]:
        mol = gto.M(atom=h2(0.74), basis=basis, verbose=0)
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        e = mf.kernel()
        rows.append(["H2", basis, "0.74", "rhf", f"{e:.12f}", ""])
        if x >= 3:
            c = cc.CCSD(mf)
            c.conv_tol = 1e-10
            c.kernel()
            rows.append(["H2", basis, "0.74", "ccsd", f"{c.e_tot:.12f}", f"{c.e_corr:.12f}"])
    with open(os.path.join(out, "h2_cbs.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(REF_HEADER)
        w.writerows(rows)


def synthetic_extended(name, base_dump=None, n_aux=2, seed=7, gamma=0.7, scale=0.05):
    """Seeded extended-space set: real OBS block (if given) plus random auxiliary orbitals."""
    rng = np.random.default_rng(seed)
    out = os.path.join(HERE, "synthetic")
    os.makedirs(out, exist_ok=True)
    p = run_point(h2(0.74), "6-31g", 0, 0)
    n_obs = p["norb"]
    n = n_obs + n_aux
    h = np.zeros((n, n))
    h[:n_obs, :n_obs] = p["h1"]
    g = np.zeros((n, n, n, n))
    g[:n_obs, :n_obs, :n_obs, :n_obs] = p["eri"]
    # random couplings involving auxiliary indices, 8-fold symmetrized
    x = rng.normal(scale=scale, size=(n, n))
    x = 0.5 * (x + x.T)
    mask1 = np.ones((n, n), bool)
    mask1[:n_obs, :n_obs] = False
    h[mask1] = x[mask1]
    for a in range(n_obs, n):
        h[a, a] = 1.0 + 0.5 * (a - n_obs)
    y = rng.normal(scale=scale, size=(n, n, n, n))
    y = (y + y.transpose(1, 0, 2, 3) + y.transpose(0, 1, 3, 2) + y.transpose(1, 0, 3, 2)
         + y.transpose(2, 3, 0, 1) + y.transpose(3, 2, 0, 1) + y.transpose(2, 3, 1, 0)
         + y.transpose(3, 2, 1, 0)) / 8
    idx = np.arange(n) >= n_obs
    mask2 = idx[:, None, None, None] | idx[None, :, None, None] | idx[None, None, :, None] | idx[None, None, None, :]
    g[mask2] = y[mask2]
    for a in range(n_obs, n):
        g[a, a, a, a] = 0.6
    n_occ = 1
    write_fcidump(os.path.join(out, f"{name}.fcidump"), n, 2, 0, p["mol"].energy_nuc(), h, g, 0,
                  extra=f"NOBS={n_obs},NOCC={n_occ},")
    with open(os.path.join(out, f"{name}.geminal"), "w") as f:
        f.write(f"NEXT={n} NOBS={n_obs} NOCC={n_occ} GAMMA={gamma}\n")
        for a in range(n_occ, n):
            for b in range(n_occ, n):
                if a < n_obs and b < n_obs:
                    continue
                for i in range(n_occ):
                    for j in range(n_occ):
                        v = -0.1 * rng.random() / (1 + abs(a - b))
                        f.write(f"{v: .16e} {a + 1} {b + 1} {i + 1} {j + 1}\n")


def manifest():
    lines = []
    for root, _, files in sorted(os.walk(HERE)):
        for fn in sorted(files):
            if fn in ("manifest.sha256", "generate.py"):
                continue
            path = os.path.join(root, fn)
            with open(path, "rb") as f:
                digest = hashlib.sha256(f.read()).hexdigest()
            lines.append(f"{digest}  {os.path.relpath(path, HERE)}\n")
    with open(os.path.join(HERE, "manifest.sha256"), "w") as f:
        f.writelines(lines)


def grid(center, step, n):
    return [round(center + step * (k - n // 2), 4) for k in range(n)]


if __name__ == "__main__":
    scan("h2_631g", "H2", "6-31G", 0, h2, grid(0.74, 0.02, 15), tz=True)
    scan("h2_ccpvdz", "H2", "cc-pVDZ", 0, h2, grid(0.76, 0.02, 15))
    scan("h3p_631g_tri", "H3+_tri", "6-31G", 1, h3p_tri, grid(0.86, 0.02, 15))
    scan("h3p_631g_lin", "H3+_lin", "6-31G", 1, h3p_lin, grid(0.81, 0.02, 15))
    scan("h3p_631g_ang", "H3+_ang", "6-31G", 1, h3p_ang, [60.0 + 15.0 * k for k in range(9)])
    scan("h3p_ccpvdz_tri", "H3+_tri", "cc-pVDZ", 1, h3p_tri, [0.90])
    scan("lih_631g", "LiH", "6-31G", 0, diatomic("Li", "H"), grid(1.66, 0.04, 9), nfrozen=1)
    scan("bh_631g", "BH", "6-31G", 0, diatomic("B", "H"), [1.25], nfrozen=1)
    scan("hf_631g", "HF", "6-31G", 0, diatomic("F", "H"), [0.93], nfrozen=1)
    cbs_series()
    synthetic_extended("h2_631g_aux2")
    manifest()
