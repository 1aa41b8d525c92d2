"""Command-line front end.

Subcommands: keygen / sign / verify for both schemes, ``bounds eval`` and
``bounds sweep`` for the calculator, ``game run`` for the security games,
and ``lab`` for the oracle experiments.  Reports are JSON on stdout; keys
and signatures are binary files; CSV only via --csv.

Exit codes: 0 success or accept, 1 verify reject, 2 parameter validation,
3 file-format error, 4 signer not in ring, 5 other failures.
``--seed`` falls back to the RINGFORGE_SEED environment variable.
"""

from __future__ import annotations

import argparse
import csv as csv_mod
import json
import os
import struct
import sys

import numpy as np

from . import bounds as bnd
from . import games as gm
from . import oraclelab as lab
from .distmath import INF_ORDER, dist_from_json
from .lattice import KleinBasis, NtruTrapdoor
from .ring import Poly, RingParams, poly_from_bytes, poly_from_coeffs, poly_inverse, poly_mul, poly_to_bytes
from .rpsf import RpsfPublicKey, RpsfSecretKey, rpsf_keygen, rpsf_setup
from .ringsig import (
    AosSecretKey,
    RpsfSigParams,
    aos_sign,
    aos_verify,
    decode_aos_signature,
    decode_rpsf_signature,
    encode_aos_signature,
    encode_rpsf_signature,
    rpsf_ring_sign,
    rpsf_ring_verify,
)
from .sigma import SigmaInstance, SigmaWitness, sigma_gen
from .rpsf import SignerNotInRing

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_PARAMS = 2
EXIT_FORMAT = 3
EXIT_NOT_IN_RING = 4
EXIT_OTHER = 5

MAGIC_RPSF_PK = b"RFPK"
MAGIC_RPSF_SK = b"RFSK"
MAGIC_AOS_PK = b"RFAP"
MAGIC_AOS_SK = b"RFAS"
KEY_VERSION = 1


class FormatError(ValueError):
    pass


class CliError(SystemExit):
    pass


def _fail(code: int, message: str) -> "SystemExit":
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(code)


# ---------------------------------------------------------------------------
# key file formats
# ---------------------------------------------------------------------------


def _pack_signed(coeffs) -> bytes:
    for c in coeffs:
        if not -(1 << 15) <= c < (1 << 15):
            raise FormatError(f"trapdoor coefficient {c} exceeds 16-bit storage")
    return struct.pack(f"<{len(coeffs)}h", *coeffs)


def write_rpsf_keys(pk: RpsfPublicKey, sk: RpsfSecretKey, params: RpsfSigParams, prefix: str):
    rp = params.rpsf.ring
    header = struct.pack("<BHH", KEY_VERSION, rp.degree, rp.modulus)
    with open(prefix + ".pk", "wb") as fh:
        fh.write(MAGIC_RPSF_PK + header + poly_to_bytes(pk.h, rp))
    td = sk.trapdoor
    body = b"".join(_pack_signed(v) for v in (td.f, td.g, td.big_f, td.big_g))
    with open(prefix + ".sk", "wb") as fh:
        fh.write(MAGIC_RPSF_SK + header + body)


def read_rpsf_pk(path: str, params: RpsfSigParams) -> RpsfPublicKey:
    rp = params.rpsf.ring
    data = open(path, "rb").read()
    if data[:4] != MAGIC_RPSF_PK:
        raise FormatError(f"{path}: bad public-key magic")
    ver, m, q = struct.unpack_from("<BHH", data, 4)
    if ver != KEY_VERSION or m != rp.degree or q != rp.modulus:
        raise FormatError(f"{path}: key header does not match parameters")
    return RpsfPublicKey(h=poly_from_bytes(data[9:], rp))


def read_rpsf_sk(path: str, params: RpsfSigParams) -> RpsfSecretKey:
    """Load a trapdoor; h and the Gram-Schmidt data are recomputed, never stored."""
    rp = params.rpsf.ring
    data = open(path, "rb").read()
    if data[:4] != MAGIC_RPSF_SK:
        raise FormatError(f"{path}: bad secret-key magic")
    ver, m, q = struct.unpack_from("<BHH", data, 4)
    if ver != KEY_VERSION or m != rp.degree or q != rp.modulus:
        raise FormatError(f"{path}: key header does not match parameters")
    body = data[9:]
    if len(body) != 8 * m:
        raise FormatError(f"{path}: truncated trapdoor body")
    vecs = [struct.unpack_from(f"<{m}h", body, 2 * m * i) for i in range(4)]
    f, g, big_f, big_g = ([int(c) for c in v] for v in vecs)
    f_poly = poly_from_coeffs(f, rp)
    h = poly_mul(poly_from_coeffs(g, rp), poly_inverse(f_poly, rp), rp)
    from .lattice import _build_basis

    basis = _build_basis(rp, f, g, big_f, big_g)
    td = NtruTrapdoor(
        params=rp, f=tuple(f), g=tuple(g), big_f=tuple(big_f), big_g=tuple(big_g),
        h=h, basis=basis,
    )
    pk = RpsfPublicKey(h=h)
    return RpsfSecretKey(trapdoor=td, public=pk)


def write_aos_keys(inst: SigmaInstance, sk: AosSecretKey, prefix: str):
    enc = inst.encode()
    with open(prefix + ".pk", "wb") as fh:
        fh.write(MAGIC_AOS_PK + struct.pack("<B", KEY_VERSION) + enc)
    with open(prefix + ".sk", "wb") as fh:
        fh.write(
            MAGIC_AOS_SK
            + struct.pack("<BH", KEY_VERSION, len(enc))
            + enc
            + bytes(sk.witness.coloring)
        )


def read_aos_pk(path: str) -> SigmaInstance:
    data = open(path, "rb").read()
    if data[:4] != MAGIC_AOS_PK:
        raise FormatError(f"{path}: bad public-key magic")
    (ver,) = struct.unpack_from("<B", data, 4)
    if ver != KEY_VERSION:
        raise FormatError(f"{path}: unknown key version")
    return SigmaInstance.decode(data[5:])


def read_aos_sk(path: str) -> AosSecretKey:
    data = open(path, "rb").read()
    if data[:4] != MAGIC_AOS_SK:
        raise FormatError(f"{path}: bad secret-key magic")
    ver, ilen = struct.unpack_from("<BH", data, 4)
    if ver != KEY_VERSION:
        raise FormatError(f"{path}: unknown key version")
    inst = SigmaInstance.decode(data[7 : 7 + ilen])
    coloring = tuple(data[7 + ilen :])
    if len(coloring) != inst.vertices:
        raise FormatError(f"{path}: coloring length mismatch")
    return AosSecretKey(instance=inst, witness=SigmaWitness(coloring=coloring))


# ---------------------------------------------------------------------------
# parameter files
# ---------------------------------------------------------------------------


def load_scheme_params(path: str):
    try:
        obj = json.load(open(path))
    except (OSError, json.JSONDecodeError) as exc:
        raise _fail(EXIT_PARAMS, f"cannot read parameter file {path}: {exc}")
    scheme = obj.get("scheme")
    try:
        if scheme == "rpsf":
            base = rpsf_setup(
                degree=obj["degree"],
                modulus=obj["modulus"],
                kappa=obj.get("kappa", 4),
                tau=obj.get("tau", 1.2),
                s=obj.get("s"),
                s_key=obj.get("s_key"),
                alpha_quality=obj.get("alpha_quality", 1.17),
            )
            return "rpsf", RpsfSigParams(
                rpsf=base,
                salt_bits=obj.get("salt_bits", 128),
                max_retries=obj.get("max_retries", 64),
            )
        if scheme == "aos":
            return "aos", {
                "vertices": obj.get("vertices", 6),
                "edge_density": obj.get("edge_density", 0.8),
                "rand_bits": obj.get("rand_bits", 128),
                "kappa": obj.get("kappa", 8),
            }
    except (KeyError, ValueError) as exc:
        raise _fail(EXIT_PARAMS, f"invalid parameters: {exc}")
    raise _fail(EXIT_PARAMS, f"parameter file must set scheme to rpsf or aos, got {scheme!r}")


def _seed_from(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RINGFORGE_SEED")
    return int(env) if env else None


# ---------------------------------------------------------------------------
# keygen / sign / verify
# ---------------------------------------------------------------------------


def cmd_keygen(args) -> int:
    scheme, params = load_scheme_params(args.params)
    rng = np.random.default_rng(_seed_from(args))
    if scheme == "rpsf":
        pk, sk = rpsf_keygen(params.rpsf, rng)
        write_rpsf_keys(pk, sk, params, args.out)
    else:
        from .games import sigma_gen_retry

        inst, wit = sigma_gen_retry(
            params["vertices"], params["edge_density"], rng, params["rand_bits"]
        )
        write_aos_keys(inst, AosSecretKey(instance=inst, witness=wit), args.out)
    print(json.dumps({"scheme": scheme, "public": args.out + ".pk", "secret": args.out + ".sk"}))
    return EXIT_OK


def cmd_sign(args) -> int:
    scheme, params = load_scheme_params(args.params)
    rng = np.random.default_rng(_seed_from(args))
    message = open(args.message, "rb").read()
    try:
        if scheme == "rpsf":
            sk = read_rpsf_sk(args.key, params)
            ring = [read_rpsf_pk(p, params) for p in args.ring]
            sig = rpsf_ring_sign(sk, ring, message, params, rng)
            blob = encode_rpsf_signature(sig, params)
        else:
            sk = read_aos_sk(args.key)
            ring = [read_aos_pk(p) for p in args.ring]
            sig = aos_sign(sk, ring, message, rng, kappa=params["kappa"])
            blob = encode_aos_signature(sig)
    except FormatError as exc:
        raise _fail(EXIT_FORMAT, str(exc))
    except SignerNotInRing as exc:
        raise _fail(EXIT_NOT_IN_RING, str(exc))
    except ValueError as exc:
        raise _fail(EXIT_PARAMS, str(exc))
    open(args.out, "wb").write(blob)
    print(json.dumps({"signature": args.out, "bytes": len(blob)}))
    return EXIT_OK


def cmd_verify(args) -> int:
    scheme, params = load_scheme_params(args.params)
    message = open(args.message, "rb").read()
    try:
        data = open(args.sig, "rb").read()
        if scheme == "rpsf":
            ring = [read_rpsf_pk(p, params) for p in args.ring]
            sig = decode_rpsf_signature(data, params)
            ok = rpsf_ring_verify(ring, message, sig, params)
        else:
            ring = [read_aos_pk(p) for p in args.ring]
            sig = decode_aos_signature(data)
            ok = aos_verify(ring, message, sig)
    except FormatError as exc:
        raise _fail(EXIT_FORMAT, str(exc))
    except ValueError as exc:
        raise _fail(EXIT_FORMAT, str(exc))
    print(json.dumps({"accepted": bool(ok)}))
    return EXIT_OK if ok else EXIT_REJECT


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def _alpha_of(obj, key, default=2.0):
    v = obj.get(key, default)
    return INF_ORDER if v == "inf" else v


def _eval_theorem(name: str, obj: dict) -> dict:
    if name == "osw":
        val = bnd.osw_statistical_bound(obj["q"], obj["eps"])
        return {"name": "osw", "bounds": {"statistical": val}, "subterms": {}}
    if name == "sr":
        val = bnd.small_range_bound(
            obj["q"], obj["r"], _alpha_of(obj, "alpha"), obj["delta"], obj["p_win_q"]
        )
        return {
            "name": "sr",
            "bounds": {"mixed": val},
            "subterms": {"ell": bnd.ell_small_range(obj["q"])},
        }
    if name == "repro":
        delta = bnd.adaptive_repro_delta(obj["R"], obj["q"], obj["p_max"])
        out = {"delta_repr": delta}
        if "delta_qu" in obj:
            out["switch_statistical"] = bnd.adaptive_repro_switch_stat(
                obj["R"], obj["q"], obj["p_max"], obj["delta_qu"]
            )
        if "renyi" in obj:
            out["switch_renyi"] = bnd.adaptive_repro_switch_renyi(
                obj["R"], obj["q"], obj["p_max"], obj["renyi"],
                _alpha_of(obj, "alpha"), obj.get("p_win", 1.0),
            )
        return {"name": "repro", "bounds": out, "subterms": {}}
    if name == "mandr":
        out = {"factor": bnd.mandr_factor(obj["q"], obj["n"])}
        if "adv_imp" in obj:
            out["ufnra"] = bnd.aos_ufnra_imp_bound(obj["q"], obj["n"], obj["adv_imp"])
        return {"name": "mandr", "bounds": out, "subterms": {}}
    if name == "qcol":
        val = bnd.qrom_collision_bound(obj["q"], obj["gamma_cl"], obj["y_size"])
        return {"name": "qcol", "bounds": {"collision": val}, "subterms": {}}
    params = bnd.BoundParams.from_json(obj)
    table = {
        "thm7": bnd.rpsf_sufcra_bounds,
        "thm8": bnd.rpsf_ufcra1_bounds,
        "anon": bnd.anon_bounds,
        "thm10": bnd.aos_sufcra_bounds,
        "thm13": bnd.aos_ufnra_extract_bound,
        "thm17": bnd.aos_ufnra_merkle_bound,
        "gandalf": bnd.ntru_sufcra_bound,
    }
    if name == "thm11":
        q_h, n, adv = params.need("q_h", "n_ring", "adv_imp")
        return {
            "name": "thm11",
            "bounds": {"ufnra": bnd.aos_ufnra_imp_bound(q_h, n, adv)},
            "subterms": {"factor": bnd.mandr_factor(q_h + n, n)},
        }
    if name not in table:
        raise ValueError(f"unknown theorem selector {name!r}")
    return table[name](params).to_json()


def cmd_bounds_eval(args) -> int:
    try:
        obj = json.load(open(args.params))
        report = _eval_theorem(args.theorem, obj)
    except (OSError, json.JSONDecodeError, KeyError, ValueError, bnd.MissingParam) as exc:
        raise _fail(EXIT_PARAMS, f"bounds eval failed: {exc}")
    report["bounds_clamped"] = {k: min(1.0, v) for k, v in report["bounds"].items()}
    print(json.dumps(report, indent=2, default=float))
    return EXIT_OK


def cmd_bounds_sweep(args) -> int:
    try:
        obj = json.load(open(args.params))
        values = np.geomspace(args.start, args.stop, args.steps) if args.log else np.linspace(
            args.start, args.stop, args.steps
        )
        rows = []
        names = None
        for v in values:
            here = dict(obj)
            here[args.vary] = float(v)
            report = _eval_theorem(args.theorem, here)
            if names is None:
                names = list(report["bounds"])
            rows.append([float(v)] + [float(report["bounds"][k]) for k in names])
    except (OSError, json.JSONDecodeError, KeyError, ValueError, bnd.MissingParam) as exc:
        raise _fail(EXIT_PARAMS, f"bounds sweep failed: {exc}")
    writer = csv_mod.writer(open(args.csv, "w", newline="") if args.csv else sys.stdout)
    writer.writerow([args.vary] + names)
    writer.writerows(rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# games
# ---------------------------------------------------------------------------


def cmd_game_run(args) -> int:
    if args.trials < 1:
        raise _fail(EXIT_PARAMS, "trials must be >= 1")
    cfg_kwargs = {}
    if args.params:
        try:
            cfg_kwargs = json.load(open(args.params))
        except (OSError, json.JSONDecodeError) as exc:
            raise _fail(EXIT_PARAMS, f"cannot read {args.params}: {exc}")
    cfg = gm.GameConfig(scheme=args.scheme, seed=_seed_from(args), **cfg_kwargs)
    factory = gm.BUILTIN_ADVERSARIES.get(args.adversary)
    if factory is None:
        raise _fail(EXIT_PARAMS, f"unknown adversary {args.adversary!r}")
    try:
        if args.game == "anon":
            result = gm.run_anon(cfg, factory(), args.trials)
            out = {
                "game": "anon",
                "advantage_estimate": result.advantage_estimate,
                "stderr": result.stderr,
                "wins": result.wins,
                "trials": result.trials,
            }
        elif args.game == "ufnra-extract":
            if args.scheme != "aos":
                raise _fail(EXIT_PARAMS, "ufnra-extract requires --scheme aos")
            runs = []
            for t in range(args.trials):
                cfg_t = gm.GameConfig(
                    scheme=args.scheme,
                    seed=None if cfg.seed is None else cfg.seed + t,
                    **cfg_kwargs,
                )
                runs.append(gm.run_ufnra_with_extraction(cfg_t, factory()))
            out = {
                "game": "ufnra-extract",
                "trials": args.trials,
                "forgeries_valid": sum(r["forgery_valid"] for r in runs),
                "witnesses_extracted": sum(r["witness_extracted"] for r in runs),
            }
        else:
            runner = gm.run_sufcra if args.game == "sufcra" else gm.run_ufcra1
            wins = 0
            fresh = 0
            queries = 0
            for t in range(args.trials):
                cfg_t = gm.GameConfig(
                    scheme=args.scheme,
                    seed=None if cfg.seed is None else cfg.seed + t,
                    **cfg_kwargs,
                )
                res = runner(cfg_t, factory())
                wins += res.won
                fresh += res.freshness_violation
                queries += res.queries_used
            out = {
                "game": args.game,
                "trials": args.trials,
                "wins": wins,
                "freshness_violations": fresh,
                "queries_used": queries,
            }
    except gm.AdversaryProtocolViolation as exc:
        print(json.dumps({"game": args.game, "protocol_violation": str(exc)}))
        return EXIT_OK
    print(json.dumps(out))
    return EXIT_OK


# ---------------------------------------------------------------------------
# lab
# ---------------------------------------------------------------------------


def _lab_config(args) -> dict:
    try:
        return json.load(open(args.config))
    except (OSError, json.JSONDecodeError) as exc:
        raise _fail(EXIT_PARAMS, f"cannot read config {args.config}: {exc}")


def cmd_lab(args) -> int:
    obj = _lab_config(args)
    rng = np.random.default_rng(obj.get("seed", _seed_from(args)))
    try:
        if args.experiment == "dj":
            cfg = lab.DjConfig(
                n=obj["n"],
                n_prime=obj["n_prime"],
                p=dist_from_json(obj["p"]),
                q=dist_from_json(obj["q"]),
                mc_samples=obj.get("mc_samples", 10_000),
            )
            closed = lab.dj_ratio_closed_form(cfg)
            out = {
                "closed_form": {
                    "ratio": closed.ratio,
                    "ep_z2": closed.ep_z2,
                    "eq_z2": closed.eq_z2,
                    "y0": str(closed.y0),
                    "padding_imbalance": closed.padding_imbalance,
                }
            }
            if obj.get("monte_carlo", True):
                mc = lab.dj_ratio_monte_carlo(cfg, rng)
                out["monte_carlo"] = {
                    "ep_z2_hat": mc.ep_z2_hat,
                    "eq_z2_hat": mc.eq_z2_hat,
                    "samples": mc.samples,
                }
        elif args.experiment == "grover":
            cfg = lab.GroverConfig(
                n_domain=obj["n_domain"],
                eps=obj["eps"],
                q=obj["q"],
                trials=obj.get("trials", 1000),
            )
            rep = lab.grover_tightness(cfg, rng)
            out = {
                "trials": cfg.trials,
                "band_low": rep.band_low.tolist(),
                "trace_distances": rep.trace_distances.tolist(),
                "band_high": rep.band_high.tolist(),
                "osw_bounds": rep.osw_bounds.tolist(),
                "all_within_band": rep.all_within_band(),
                "below_osw": bool(np.all(rep.trace_distances <= rep.osw_bounds + 1e-12)),
                "regime_violations": int(np.sum(rep.regime_violations)),
                "max_rotation_residual": float(np.max(rep.rotation_residuals)),
            }
            if args.csv:
                with open(args.csv, "w", newline="") as fh:
                    w = csv_mod.writer(fh)
                    w.writerow(["marked", "band_low", "distance", "band_high", "osw"])
                    for row in zip(
                        rep.marked_counts, rep.band_low, rep.trace_distances,
                        rep.band_high, rep.osw_bounds,
                    ):
                        w.writerow([f"{x}" for x in row])
        elif args.experiment == "small-range":
            table = lab.small_range_build(
                obj["r"], dist_from_json(obj["dist"]), obj["domain_size"], rng
            )
            out = {"table": [str(x) for x in table], "distinct": len(set(table))}
        elif args.experiment == "repro":
            rep = lab.repro_classical_check(
                obj["R"], dist_from_json(obj["q_dist"]), obj.get("trials", 20_000), rng
            )
            out = {
                "lhs_advantage": rep.lhs_advantage,
                "rhs_bound": rep.rhs_bound,
                "stderr": rep.stderr,
                "pass": rep.passed,
            }
        else:  # pragma: no cover - argparse restricts choices
            raise ValueError(f"unknown experiment {args.experiment!r}")
    except (KeyError, ValueError) as exc:
        raise _fail(EXIT_PARAMS, f"lab {args.experiment} failed: {exc}")
    print(json.dumps(out, default=float))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ringforge", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="generate a key pair")
    kg.add_argument("--scheme", choices=["rpsf", "aos"], help="must match the params file")
    kg.add_argument("--params", required=True)
    kg.add_argument("--out", required=True, help="output prefix for .pk/.sk")
    kg.add_argument("--seed", type=int)
    kg.set_defaults(func=cmd_keygen)

    sg = sub.add_parser("sign", help="sign a message file for a ring")
    sg.add_argument("--scheme", choices=["rpsf", "aos"])
    sg.add_argument("--params", required=True)
    sg.add_argument("--key", required=True)
    sg.add_argument("--ring", nargs="+", required=True)
    sg.add_argument("--message", required=True)
    sg.add_argument("--out", required=True)
    sg.add_argument("--seed", type=int)
    sg.set_defaults(func=cmd_sign)

    vf = sub.add_parser("verify", help="verify a signature file")
    vf.add_argument("--scheme", choices=["rpsf", "aos"])
    vf.add_argument("--params", required=True)
    vf.add_argument("--ring", nargs="+", required=True)
    vf.add_argument("--message", required=True)
    vf.add_argument("--sig", required=True)
    vf.add_argument("--seed", type=int)
    vf.set_defaults(func=cmd_verify)

    bd = sub.add_parser("bounds", help="concrete-security calculator")
    bsub = bd.add_subparsers(dest="bounds_command", required=True)
    be = bsub.add_parser("eval")
    be.add_argument(
        "--theorem",
        required=True,
        choices=[
            "osw", "sr", "repro", "mandr", "qcol",
            "thm7", "thm8", "anon", "thm10", "thm11", "thm13", "thm17", "gandalf",
        ],
    )
    be.add_argument("--params", required=True)
    be.set_defaults(func=cmd_bounds_eval)
    bs = bsub.add_parser("sweep")
    bs.add_argument("--theorem", required=True)
    bs.add_argument("--params", required=True)
    bs.add_argument("--vary", required=True)
    bs.add_argument("--start", type=float, required=True)
    bs.add_argument("--stop", type=float, required=True)
    bs.add_argument("--steps", type=int, default=20)
    bs.add_argument("--log", action="store_true")
    bs.add_argument("--csv")
    bs.set_defaults(func=cmd_bounds_sweep)

    gme = sub.add_parser("game", help="run security games")
    gsub = gme.add_subparsers(dest="game_command", required=True)
    gr = gsub.add_parser("run")
    gr.add_argument("--scheme", choices=["rpsf", "aos"], required=True)
    gr.add_argument(
        "--game", choices=["sufcra", "ufcra1", "anon", "ufnra-extract"], required=True
    )
    gr.add_argument("--adversary", required=True)
    gr.add_argument("--trials", type=int, default=1)
    gr.add_argument("--seed", type=int)
    gr.add_argument("--params", help="JSON overriding GameConfig fields")
    gr.set_defaults(func=cmd_game_run)

    lb = sub.add_parser("lab", help="oracle distribution-switching experiments")
    lb.add_argument("experiment", choices=["dj", "grover", "small-range", "repro"])
    lb.add_argument("--config", required=True)
    lb.add_argument("--csv")
    lb.add_argument("--seed", type=int)
    lb.set_defaults(func=cmd_lab)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except FormatError as exc:
        raise _fail(EXIT_FORMAT, str(exc))
    except Exception as exc:  # pragma: no cover - last-resort mapping
        raise _fail(EXIT_OTHER, f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
