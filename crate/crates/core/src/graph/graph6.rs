//! graph6 codec (the nauty/McKay format): an order prefix followed by the
//! upper triangle of the adjacency matrix, column by column, packed six bits
//! per printable byte.

use super::Graph;
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

fn err(msg: impl Into<String>) -> Error {
    Error::Graph6(msg.into())
}

fn sextet(byte: u8) -> Result<u32> {
    if (63..=126).contains(&byte) {
        Ok(u32::from(byte - 63))
    } else {
        Err(err(format!("invalid character {:?}", byte as char)))
    }
}

fn decode_order(bytes: &[u8]) -> Result<(usize, usize)> {
    let first = *bytes.first().ok_or_else(|| err("empty input"))?;
    if first != b'~' {
        return Ok((sextet(first)? as usize, 1));
    }
    let (width, start) = if bytes.get(1) == Some(&b'~') { (6, 2) } else { (3, 1) };
    let field = bytes
        .get(start..start + width)
        .ok_or_else(|| err("truncated length field"))?;
    let mut n: u64 = 0;
    for &b in field {
        n = (n << 6) | u64::from(sextet(b)?);
    }
    let small_limit = if width == 3 { 63 } else { 258_048 };
    if n < small_limit {
        return Err(err(format!("non-canonical length field for n = {n}")));
    }
    let n = usize::try_from(n).map_err(|_| err("order does not fit in memory"))?;
    Ok((n, start + width))
}

/// Decodes one graph6 line (optional `>>graph6<<` header, surrounding
/// whitespace ignored). Weights are all 1.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let text = text.trim();
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    let (n, offset) = decode_order(bytes)?;
    let bits = n * n.saturating_sub(1) / 2;
    let body = &bytes[offset..];
    let expected = bits.div_ceil(6);
    if body.len() < expected {
        return Err(err(format!("expected {expected} data bytes, found {}", body.len())));
    }
    if body.len() > expected {
        return Err(err(format!("{} bytes of trailing garbage", body.len() - expected)));
    }
    let values = body.iter().map(|&b| sextet(b)).collect::<Result<Vec<_>>>()?;
    let bit = |k: usize| values[k / 6] >> (5 - k % 6) & 1 == 1;
    let pad = expected * 6 - bits;
    if pad > 0 && (bits..bits + pad).any(bit) {
        return Err(err("nonzero padding bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edge_list(n, &edges, None)
}

/// Encodes the adjacency of `g` (weights are not representable and are dropped).
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::new();
    let push_wide = |out: &mut Vec<u8>, n: u64, width: u32| {
        for k in (0..width).rev() {
            out.push(63 + ((n >> (6 * k)) & 63) as u8);
        }
    };
    if n < 63 {
        out.push(63 + n as u8);
    } else if n < 258_048 {
        out.push(b'~');
        push_wide(&mut out, n as u64, 3);
    } else {
        out.extend_from_slice(b"~~");
        push_wide(&mut out, n as u64, 6);
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.adjacent(i, j));
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;
    use proptest::prelude::*;

    /// Independent decoder: expands every byte to six characters of '0'/'1'
    /// and reads the triangle off the string.
    fn hand_decode(s: &str) -> (usize, Vec<(usize, usize)>) {
        let b = s.as_bytes();
        let n = (b[0] - 63) as usize;
        let bitstring: String = b[1..].iter().map(|&c| format!("{:06b}", c - 63)).collect();
        let mut edges = Vec::new();
        let mut chars = bitstring.chars();
        for j in 1..n {
            for i in 0..j {
                if chars.next() == Some('1') {
                    edges.push((i, j));
                }
            }
        }
        edges.sort();
        (n, edges)
    }

    #[test]
    fn agrees_with_hand_decoder() {
        for s in ["D?{", "DQc", "Fw_?W"] {
            let g = parse_graph6(s).unwrap();
            let (n, edges) = hand_decode(s);
            assert_eq!(g.order(), n, "{s}");
            assert_eq!(g.edges(), edges, "{s}");
        }
        // vertex 4 joined to 0..3
        assert_eq!(parse_graph6("D?{").unwrap().edges(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        // A-C, A-E, B-D, D-E
        assert_eq!(parse_graph6("DQc").unwrap().edges(), vec![(0, 2), (0, 4), (1, 3), (3, 4)]);
    }

    #[test]
    fn empty_graph_on_five() {
        let g = parse_graph6("D??").unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn pentagon_round_trip() {
        let c5 = Graph::cycle(5).unwrap();
        let s = encode_graph6(&c5);
        let back = parse_graph6(&s).unwrap();
        assert_eq!(back, c5);
        assert!(is_isomorphic(&back, &c5).unwrap().is_some());
        assert_eq!(parse_graph6(&format!(">>graph6<<{s}\n")).unwrap(), c5);
    }

    #[test]
    fn large_order_prefix() {
        let g = Graph::empty(100);
        let s = encode_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap().order(), 100);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("D?").is_err(), "truncated");
        assert!(parse_graph6("D??A").is_err(), "trailing garbage");
        assert!(parse_graph6("D? {").is_err(), "invalid character");
        assert!(parse_graph6("~??").is_err(), "truncated length");
        assert!(parse_graph6("~??D").is_err(), "non-canonical length");
        assert!(parse_graph6("B@").is_err(), "padding bits set");
    }

    proptest! {
        #[test]
        fn round_trips(n in 0usize..=12, seed in any::<u64>()) {
            let mut edges = Vec::new();
            let mut s = seed;
            for i in 0..n {
                for j in i + 1..n {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if s >> 63 == 1 {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::from_edge_list(n, &edges, None).unwrap();
            prop_assert_eq!(parse_graph6(&encode_graph6(&g)).unwrap(), g);
        }
    }
}
