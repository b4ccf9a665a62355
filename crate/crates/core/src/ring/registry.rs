use std::path::Path;
use std::sync::Arc;

use num_bigint::BigUint;

use super::{
    product_ring, split_top_level, validate_ring, FileRing, FiniteGroup, FreeRing, FusionRing,
    GroupDualRing, HeisenbergRing, RepVector, Ring, SpinKind, SpinRing, TorusRing,
};
use crate::error::{Error, Result};

fn param<T: std::str::FromStr>(spec: &str, rest: &str, key: &str) -> Result<T> {
    let value = rest
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::bad_param(spec, format!("expected `{key}=<value>`")))?;
    value
        .trim()
        .parse()
        .map_err(|_| Error::bad_param(spec, format!("cannot parse `{value}`")))
}

fn validated(ring: Ring) -> Result<Ring> {
    let budget = ring.size().unwrap_or(20);
    let report = validate_ring(ring.as_ref(), budget);
    match report.violations.first() {
        None => Ok(ring),
        Some(v) => Err(Error::Validation(v.to_string())),
    }
}

/// Builds a ring from a registry string or a fusion-ring file path.
///
/// Registry: `su2`, `so3`, `su2q:q=<q>`, `ao:n=<n>`, `torus:d=<d>`,
/// `free:k=<k>`, `heisenberg`, `product:<A>+<B>`, `file:<path>`,
/// `group-dual:file=<path>`, `group-dual:s3`, `group-dual:cyclic=<n>`.
/// File-backed rings are validated on all their irreducibles.
pub fn load_ring(spec: &str) -> Result<Ring> {
    let spec = spec.trim();
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let ring: Ring = match head {
        "su2" if rest.is_empty() => Arc::new(SpinRing::new(SpinKind::Su2)),
        "so3" if rest.is_empty() => Arc::new(SpinRing::new(SpinKind::So3)),
        "heisenberg" if rest.is_empty() => Arc::new(HeisenbergRing),
        "su2q" => {
            let q: f64 = param(spec, rest, "q")?;
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::bad_param(spec, "q must lie in (0, 1)"));
            }
            Arc::new(SpinRing::new(SpinKind::Su2q(q)))
        }
        "ao" => {
            let n: u32 = param(spec, rest, "n")?;
            if n < 2 {
                return Err(Error::bad_param(spec, "n must be at least 2"));
            }
            Arc::new(SpinRing::new(SpinKind::Ao(n)))
        }
        "torus" => {
            let d: usize = param(spec, rest, "d")?;
            if d == 0 {
                return Err(Error::bad_param(spec, "d must be at least 1"));
            }
            Arc::new(TorusRing::new(d))
        }
        "free" => {
            let k: u8 = param(spec, rest, "k")?;
            if !(1..=26).contains(&k) {
                return Err(Error::bad_param(spec, "k must lie in 1..=26"));
            }
            Arc::new(FreeRing::new(k))
        }
        "product" => return load_product(spec, rest),
        "file" => validated(Arc::new(FileRing::load(rest)?))?,
        "group-dual" => {
            let group = if rest == "s3" {
                FiniteGroup::symmetric3()
            } else if let Some(n) = rest.strip_prefix("cyclic=") {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::bad_param(spec, "cannot parse group order"))?;
                if n == 0 {
                    return Err(Error::bad_param(spec, "group order must be positive"));
                }
                FiniteGroup::cyclic(n)
            } else {
                FiniteGroup::load(&param::<String>(spec, rest, "file")?)?
            };
            validated(Arc::new(GroupDualRing::new(group, spec.to_string())))?
        }
        _ if Path::new(spec).is_file() => validated(Arc::new(FileRing::load(spec)?))?,
        _ => return Err(Error::UnknownRing(spec.to_string())),
    };
    Ok(ring)
}

/// Tries each `+` as the factor separator, so nested products parse.
fn load_product(spec: &str, rest: &str) -> Result<Ring> {
    let mut last = Error::bad_param(spec, "expected `product:<A>+<B>`");
    for (i, _) in rest.match_indices('+') {
        match (load_ring(&rest[..i]), load_ring(&rest[i + 1..])) {
            (Ok(a), Ok(b)) => return Ok(Arc::new(product_ring(a, b))),
            (Err(e), _) | (_, Err(e)) => last = e,
        }
    }
    Err(last)
}

/// Parses `id:mult,…` into a representation of `ring`. A missing `:mult`
/// means multiplicity 1.
pub fn parse_generator(ring: &dyn FusionRing, text: &str) -> Result<RepVector> {
    let mut out = RepVector::new();
    for item in split_top_level(text.trim(), ',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::BadIrrepLabel(text.to_string()));
        }
        let (label, mult) = match item.rsplit_once(':') {
            Some((l, m))
                if m.trim().chars().all(|c| c.is_ascii_digit()) && !m.trim().is_empty() =>
            {
                (
                    l,
                    m.trim()
                        .parse::<BigUint>()
                        .map_err(|_| Error::BadIrrepLabel(item.into()))?,
                )
            }
            _ => (item, BigUint::from(1u32)),
        };
        if mult == BigUint::default() {
            return Err(Error::BadIrrepLabel(format!(
                "{item}: multiplicity must be positive"
            )));
        }
        let id = ring.parse_irrep(label)?;
        if !ring.contains(&id) {
            return Err(Error::UnknownIrrep(label.to_string()));
        }
        out.add(id, mult);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{fuse, IrrepId};

    #[test]
    fn registry_names() {
        for s in [
            "su2",
            "so3",
            "su2q:q=0.5",
            "ao:n=3",
            "torus:d=2",
            "free:k=2",
            "heisenberg",
            "product:su2+torus:d=1",
            "product:product:su2+su2+so3",
            "group-dual:s3",
            "group-dual:cyclic=4",
        ] {
            let r = load_ring(s).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(load_ring(&r.spec()).unwrap().spec(), r.spec());
        }
    }

    #[test]
    fn bad_specs() {
        assert!(matches!(load_ring("su3"), Err(Error::UnknownRing(_))));
        assert!(matches!(
            load_ring("su2q:q=1.5"),
            Err(Error::BadParameter { .. })
        ));
        assert!(matches!(
            load_ring("ao:n=1"),
            Err(Error::BadParameter { .. })
        ));
        assert!(matches!(
            load_ring("torus:k=2"),
            Err(Error::BadParameter { .. })
        ));
        assert!(matches!(
            load_ring("file:/nonexistent.json"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn ao_dims() {
        let r = load_ring("ao:n=3").unwrap();
        let dims: Vec<String> = (0..5)
            .map(|n| r.dim(&IrrepId::Index(n)).to_string())
            .collect();
        assert_eq!(dims, ["1", "3", "8", "21", "55"]);
    }

    #[test]
    fn generators() {
        let su2 = load_ring("su2").unwrap();
        let g = parse_generator(su2.as_ref(), "u1:2,u0").unwrap();
        assert_eq!(g.to_string(), "{u0:1, u1:2}");
        let t = load_ring("torus:d=2").unwrap();
        let g = parse_generator(t.as_ref(), "(1,0):1,(0,-1):1").unwrap();
        assert_eq!(g.len(), 2);
        let f = load_ring("free:k=2").unwrap();
        let g = parse_generator(f.as_ref(), "a:1,b:1,A:1,B:1").unwrap();
        assert_eq!(g.len(), 4);
        assert!(parse_generator(su2.as_ref(), "u1:0").is_err());
        assert!(parse_generator(f.as_ref(), "c:1").is_err());
        let p = load_ring("product:su2+su2").unwrap();
        let g = parse_generator(p.as_ref(), "[u1|u1],[u1|u0]:1").unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn fuse_examples() {
        let t = load_ring("torus:d=2").unwrap();
        let out = fuse(
            t.as_ref(),
            &IrrepId::point(&[1, 0]),
            &IrrepId::point(&[0, 1]),
        )
        .unwrap();
        assert_eq!(out.to_string(), "{(1,1):1}");
    }
}
