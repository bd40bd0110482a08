//! Weightless n-tuple discriminators over bit patterns.
//!
//! A discriminator is a bank of `k` one-bit RAM node tables behind a fixed,
//! seeded input mapping: each node reads `N` pattern bits and uses them as a
//! table address. Training writes 1 into every addressed cell; the response
//! to a query is the number of nodes whose addressed cell holds 1, an integer
//! in `[0, k]`. Learning never touches weights, only table contents, so
//! training one pattern costs exactly one table write per node.
//!
//! [`ParallelDiscriminator`] splits a rectangular region into a concentric
//! central part and its periphery and runs one discriminator per part with
//! different node sizes. Its response is the exact sum of the two part
//! responses, which weighs central pixels more per bit (small nodes mean
//! more nodes per pixel).

use serde::{Deserialize, Serialize};

use crate::bits::BitPattern;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Slot value marking a constant-0 address line. Used to fill the final node
/// when the bit count is not a multiple of the node size.
pub const PAD_SLOT: usize = usize::MAX;

/// Default ceiling on the node address width. One node of 2^24 one-bit cells
/// is already 2 MiB; larger widths are almost always a configuration slip.
pub const DEFAULT_MAX_NODE_SIZE: usize = 24;

/// Fixed assignment of pattern bits to node address lines.
///
/// The assignment is a seeded uniform shuffle of all bit indices, chopped
/// into groups of `node_size`. It is built once and then shared by the
/// training and classification phases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputMapping {
    total_bits: usize,
    node_size: usize,
    seed: u64,
    /// `node_count × node_size` slots; slot `j` of node `i` lives at
    /// `assignment[i * node_size + j]`. `PAD_SLOT` entries appear only in
    /// the final group.
    assignment: Vec<usize>,
}

/// Builds a reproducible input mapping with the default node-size ceiling.
pub fn make_input_mapping(total_bits: usize, node_size: usize, seed: u64) -> Result<InputMapping> {
    make_input_mapping_with_limit(total_bits, node_size, seed, DEFAULT_MAX_NODE_SIZE)
}

/// Same as [`make_input_mapping`] with an explicit node-size ceiling.
pub fn make_input_mapping_with_limit(
    total_bits: usize,
    node_size: usize,
    seed: u64,
    max_node_size: usize,
) -> Result<InputMapping> {
    if total_bits == 0 {
        return Err(Error::Config("mapping needs at least one input bit".into()));
    }
    if node_size == 0 || node_size > max_node_size {
        return Err(Error::Config(format!(
            "node size {node_size} outside supported range 1..={max_node_size}"
        )));
    }
    let mut assignment: Vec<usize> = (0..total_bits).collect();
    SplitMix64::new(seed).shuffle(&mut assignment);
    let node_count = total_bits.div_ceil(node_size);
    assignment.resize(node_count * node_size, PAD_SLOT);
    Ok(InputMapping {
        total_bits,
        node_size,
        seed,
        assignment,
    })
}

impl InputMapping {
    /// Builds a mapping from an explicit slot assignment, validating the
    /// partition property. Handcrafted mappings record seed 0 and are not
    /// reproducible from a seed.
    pub fn from_assignment(
        total_bits: usize,
        node_size: usize,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if total_bits == 0 || node_size == 0 {
            return Err(Error::Config("empty mapping".into()));
        }
        let node_count = total_bits.div_ceil(node_size);
        if assignment.len() != node_count * node_size {
            return Err(Error::Dimension {
                expected: node_count * node_size,
                got: assignment.len(),
            });
        }
        let mut seen = vec![false; total_bits];
        for (slot, &src) in assignment.iter().enumerate() {
            if src == PAD_SLOT {
                if slot < (node_count - 1) * node_size {
                    return Err(Error::Config(
                        "padding slots are only allowed in the final group".into(),
                    ));
                }
                continue;
            }
            if src >= total_bits || seen[src] {
                return Err(Error::Config(format!(
                    "assignment is not a partition of 0..{total_bits}"
                )));
            }
            seen[src] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Config("assignment misses input bits".into()));
        }
        Ok(InputMapping {
            total_bits,
            node_size,
            seed: 0,
            assignment,
        })
    }

    pub fn total_bits(&self) -> usize {
        self.total_bits
    }

    pub fn node_size(&self) -> usize {
        self.node_size
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len() / self.node_size
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Slots feeding node `i`.
    pub fn node_slots(&self, node: usize) -> &[usize] {
        let start = node * self.node_size;
        &self.assignment[start..start + self.node_size]
    }

    /// Number of constant-0 padding slots in the final group.
    pub fn padding_slots(&self) -> usize {
        self.assignment.iter().filter(|&&s| s == PAD_SLOT).count()
    }
}

/// A bank of `k` one-bit RAM node tables behind one input mapping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discriminator {
    mapping: InputMapping,
    /// All node tables packed contiguously: node `i` owns cells
    /// `[i << node_size, (i + 1) << node_size)`.
    memory: Vec<u64>,
}

/// Creates a discriminator with every cell zeroed; it responds 0 to any
/// pattern until trained.
pub fn new_discriminator(mapping: InputMapping) -> Discriminator {
    let bits = mapping.node_count() << mapping.node_size();
    Discriminator {
        mapping,
        memory: vec![0; bits.div_ceil(64)],
    }
}

impl Discriminator {
    pub fn new(mapping: InputMapping) -> Self {
        new_discriminator(mapping)
    }

    pub fn mapping(&self) -> &InputMapping {
        &self.mapping
    }

    pub fn node_count(&self) -> usize {
        self.mapping.node_count()
    }

    pub fn node_size(&self) -> usize {
        self.mapping.node_size()
    }

    /// Node-table memory in bits: `k · 2^N`.
    pub fn memory_footprint_bits(&self) -> u64 {
        (self.mapping.node_count() as u64) << self.mapping.node_size()
    }

    #[inline]
    fn cell_index(&self, node: usize, addr: usize) -> usize {
        (node << self.mapping.node_size()) | addr
    }

    fn check_len(&self, pattern: &BitPattern) -> Result<()> {
        if pattern.len() != self.mapping.total_bits {
            return Err(Error::Dimension {
                expected: self.mapping.total_bits,
                got: pattern.len(),
            });
        }
        Ok(())
    }

    /// Writes 1 into the cell each node addresses for `pattern`. Idempotent
    /// for a repeated pattern and order-independent across patterns.
    pub fn train(&mut self, pattern: &BitPattern) -> Result<()> {
        self.check_len(pattern)?;
        self.train_with(&|i| pattern.get(i));
        Ok(())
    }

    /// Number of nodes whose addressed cell holds 1, in `[0, k]`.
    pub fn respond(&self, pattern: &BitPattern) -> Result<u32> {
        self.check_len(pattern)?;
        Ok(self.respond_with(&|i| pattern.get(i)))
    }

    /// Trains reading bit `j` of the mapping's input space from
    /// `pattern[source[j]]`. Used to run a discriminator over a subset of a
    /// larger pattern.
    pub fn train_mapped(&mut self, pattern: &BitPattern, source: &[usize]) -> Result<()> {
        if source.len() != self.mapping.total_bits {
            return Err(Error::Dimension {
                expected: self.mapping.total_bits,
                got: source.len(),
            });
        }
        self.train_with(&|i| pattern.get(source[i]));
        Ok(())
    }

    /// Responds reading bit `j` from `pattern[source[j]]`.
    pub fn respond_mapped(&self, pattern: &BitPattern, source: &[usize]) -> Result<u32> {
        if source.len() != self.mapping.total_bits {
            return Err(Error::Dimension {
                expected: self.mapping.total_bits,
                got: source.len(),
            });
        }
        Ok(self.respond_with(&|i| pattern.get(source[i])))
    }

    fn train_with(&mut self, bit_of: &impl Fn(usize) -> bool) {
        let node_size = self.mapping.node_size;
        for (node, slots) in self.mapping.assignment.chunks_exact(node_size).enumerate() {
            let mut addr = 0usize;
            for (line, &src) in slots.iter().enumerate() {
                if src != PAD_SLOT && bit_of(src) {
                    addr |= 1 << line;
                }
            }
            let cell = (node << node_size) | addr;
            self.memory[cell >> 6] |= 1 << (cell & 63);
        }
    }

    fn respond_with(&self, bit_of: &impl Fn(usize) -> bool) -> u32 {
        let node_size = self.mapping.node_size;
        let mut sum = 0u32;
        for (node, slots) in self.mapping.assignment.chunks_exact(node_size).enumerate() {
            let mut addr = 0usize;
            for (line, &src) in slots.iter().enumerate() {
                if src != PAD_SLOT && bit_of(src) {
                    addr |= 1 << line;
                }
            }
            let cell = (node << node_size) | addr;
            sum += ((self.memory[cell >> 6] >> (cell & 63)) & 1) as u32;
        }
        sum
    }

    /// Raw cell lookup, mostly for tests and diagnostics.
    pub fn cell(&self, node: usize, addr: usize) -> bool {
        let cell = self.cell_index(node, addr);
        (self.memory[cell / 64] >> (cell % 64)) & 1 == 1
    }

    /// Allocated table storage in bits (word-granular), for footprint checks.
    pub fn allocated_bits(&self) -> u64 {
        self.memory.len() as u64 * 64
    }
}

/// Node-table memory in bits for a `k`-node discriminator of address width
/// `node_size`.
pub fn memory_footprint(d: &Discriminator) -> u64 {
    d.memory_footprint_bits()
}

/// Splits the row-major pixel indices of a `width × height` region into a
/// concentric central rectangle holding roughly `central_fraction` of the
/// area and its periphery.
///
/// The central rectangle keeps the region's aspect ratio: both axes scale by
/// `sqrt(central_fraction)`, rounded down, and the rectangle is centered.
/// `central_fraction` 1 selects everything, 0 nothing.
pub fn partition_central_peripheral(
    width: u32,
    height: u32,
    central_fraction: f64,
) -> (Vec<usize>, Vec<usize>) {
    let fraction = central_fraction.clamp(0.0, 1.0);
    let scale = fraction.sqrt();
    let inner_w = (width as f64 * scale).floor() as u32;
    let inner_h = (height as f64 * scale).floor() as u32;
    let x0 = (width - inner_w) / 2;
    let y0 = (height - inner_h) / 2;
    let mut inner = Vec::with_capacity(inner_w as usize * inner_h as usize);
    let mut outer =
        Vec::with_capacity((width * height) as usize - inner_w as usize * inner_h as usize);
    for y in 0..height {
        for x in 0..width {
            let idx = (y * width + x) as usize;
            if x >= x0 && x < x0 + inner_w && y >= y0 && y < y0 + inner_h {
                inner.push(idx);
            } else {
                outer.push(idx);
            }
        }
    }
    (inner, outer)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Part {
    indices: Vec<usize>,
    disc: Discriminator,
}

/// Two discriminators of different node sizes over disjoint parts of one
/// region; the parallel response is the exact sum of the part responses.
///
/// The inner part covers the concentric central rectangle (fraction `P` of
/// the area, where the target most likely is) with the smaller node size,
/// the outer part covers the periphery with the larger one. At `P` = 1 or 0
/// the structure degenerates to a single discriminator over the whole
/// region, bit-identical to a standalone one built from the same seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelDiscriminator {
    width: u32,
    height: u32,
    central_fraction: f64,
    inner: Option<Part>,
    outer: Option<Part>,
}

impl ParallelDiscriminator {
    pub fn new(
        width: u32,
        height: u32,
        central_fraction: f64,
        inner_node_size: usize,
        outer_node_size: usize,
        seed: u64,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Config("parallel discriminator needs a region".into()));
        }
        if !(0.0..=1.0).contains(&central_fraction) {
            return Err(Error::Config(format!(
                "central fraction {central_fraction} outside [0, 1]"
            )));
        }
        let (inner_idx, outer_idx) = partition_central_peripheral(width, height, central_fraction);
        // Both parts use the caller's seed so the P = 1 / P = 0 degenerate
        // forms match a standalone discriminator built from that seed.
        let build = |indices: Vec<usize>, node_size: usize| -> Result<Option<Part>> {
            if indices.is_empty() {
                return Ok(None);
            }
            let mapping = make_input_mapping(indices.len(), node_size, seed)?;
            Ok(Some(Part {
                indices,
                disc: new_discriminator(mapping),
            }))
        };
        Ok(ParallelDiscriminator {
            width,
            height,
            central_fraction,
            inner: build(inner_idx, inner_node_size)?,
            outer: build(outer_idx, outer_node_size)?,
        })
    }

    pub fn region_shape(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn central_fraction(&self) -> f64 {
        self.central_fraction
    }

    pub fn inner(&self) -> Option<&Discriminator> {
        self.inner.as_ref().map(|p| &p.disc)
    }

    pub fn outer(&self) -> Option<&Discriminator> {
        self.outer.as_ref().map(|p| &p.disc)
    }

    pub fn inner_indices(&self) -> &[usize] {
        self.inner.as_ref().map_or(&[], |p| &p.indices)
    }

    pub fn outer_indices(&self) -> &[usize] {
        self.outer.as_ref().map_or(&[], |p| &p.indices)
    }

    fn check_shape(&self, pattern: &BitPattern) -> Result<()> {
        let (w, h) = pattern.shape();
        if (w, h) != (self.width, self.height) {
            return Err(Error::Shape {
                expected_w: self.width,
                expected_h: self.height,
                got_w: w,
                got_h: h,
            });
        }
        Ok(())
    }

    pub fn train(&mut self, pattern: &BitPattern) -> Result<()> {
        self.check_shape(pattern)?;
        if let Some(part) = &mut self.inner {
            part.disc.train_mapped(pattern, &part.indices)?;
        }
        if let Some(part) = &mut self.outer {
            part.disc.train_mapped(pattern, &part.indices)?;
        }
        Ok(())
    }

    /// Sum of the inner and outer responses, exactly.
    pub fn respond(&self, pattern: &BitPattern) -> Result<u32> {
        self.check_shape(pattern)?;
        let mut sum = 0;
        if let Some(part) = &self.inner {
            sum += part.disc.respond_mapped(pattern, &part.indices)?;
        }
        if let Some(part) = &self.outer {
            sum += part.disc.respond_mapped(pattern, &part.indices)?;
        }
        Ok(sum)
    }

    /// Largest possible response: `k_inner + k_outer`.
    pub fn max_response(&self) -> u32 {
        let count = |p: &Option<Part>| p.as_ref().map_or(0, |p| p.disc.node_count() as u32);
        count(&self.inner) + count(&self.outer)
    }

    pub fn memory_footprint_bits(&self) -> u64 {
        let bits = |p: &Option<Part>| p.as_ref().map_or(0, |p| p.disc.memory_footprint_bits());
        bits(&self.inner) + bits(&self.outer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_pattern(width: u32, height: u32, seed: u64) -> BitPattern {
        let mut rng = SplitMix64::new(seed);
        let bits: Vec<bool> = (0..width as usize * height as usize)
            .map(|_| rng.next_u64() & 1 == 1)
            .collect();
        BitPattern::from_bits(width, height, &bits).unwrap()
    }

    #[test]
    fn mapping_partitions_all_bits() {
        let m = make_input_mapping(4, 2, 11).unwrap();
        assert_eq!(m.node_count(), 2);
        let mut seen: Vec<usize> = (0..m.node_count())
            .flat_map(|n| m.node_slots(n).to_vec())
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn mapping_pads_final_group() {
        let m = make_input_mapping(5, 2, 11).unwrap();
        assert_eq!(m.node_count(), 3);
        assert_eq!(m.padding_slots(), 1);
        assert_eq!(m.node_slots(2).iter().filter(|&&s| s == PAD_SLOT).count(), 1);
        // padding only in the final group
        assert!(m.node_slots(0).iter().all(|&s| s != PAD_SLOT));
        assert!(m.node_slots(1).iter().all(|&s| s != PAD_SLOT));
    }

    #[test]
    fn mapping_340_bits_9_wide_is_reproducible() {
        let a = make_input_mapping(340, 9, 77).unwrap();
        let b = make_input_mapping(340, 9, 77).unwrap();
        assert_eq!(a.node_count(), 38);
        assert_eq!(a.padding_slots(), 2);
        assert_eq!(a, b);
        let c = make_input_mapping(340, 9, 78).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn mapping_rejects_node_size_out_of_range() {
        assert!(matches!(
            make_input_mapping(10, 0, 1),
            Err(Error::Config(_))
        ));
        let err = make_input_mapping(10, 25, 1).unwrap_err();
        assert!(err.to_string().contains("24"), "{err}");
        assert!(make_input_mapping_with_limit(10, 25, 1, 26).is_ok());
    }

    #[test]
    fn fresh_discriminator_is_silent() {
        let d = new_discriminator(make_input_mapping(64, 4, 5).unwrap());
        for seed in 0..8 {
            assert_eq!(d.respond(&random_pattern(8, 8, seed)).unwrap(), 0);
        }
    }

    #[test]
    fn footprint_arithmetic() {
        let d = new_discriminator(make_input_mapping(340, 9, 5).unwrap());
        assert_eq!(d.memory_footprint_bits(), 38 * 512);
        let tiny = new_discriminator(make_input_mapping(1, 1, 5).unwrap());
        assert_eq!(tiny.memory_footprint_bits(), 2);
        // +1 address bit doubles the footprint at equal node count
        let a = new_discriminator(make_input_mapping(38 * 9, 9, 5).unwrap());
        let b = new_discriminator(make_input_mapping(38 * 10, 10, 5).unwrap());
        assert_eq!(a.node_count(), b.node_count());
        assert_eq!(2 * a.memory_footprint_bits(), b.memory_footprint_bits());
    }

    #[test]
    fn footprint_matches_allocation() {
        let d = new_discriminator(make_input_mapping(680, 3, 5).unwrap());
        let exact = d.memory_footprint_bits();
        assert!(d.allocated_bits() >= exact);
        assert!(d.allocated_bits() < exact + 64);
    }

    #[test]
    fn training_recalls_the_pattern() {
        let mut d = new_discriminator(make_input_mapping(340, 9, 5).unwrap());
        let p = random_pattern(20, 17, 3);
        d.train(&p).unwrap();
        assert_eq!(d.respond(&p).unwrap(), d.node_count() as u32);
    }

    #[test]
    fn training_is_idempotent() {
        let mapping = make_input_mapping(64, 4, 5).unwrap();
        let p = random_pattern(8, 8, 3);
        let mut once = new_discriminator(mapping.clone());
        once.train(&p).unwrap();
        let mut twice = new_discriminator(mapping);
        twice.train(&p).unwrap();
        twice.train(&p).unwrap();
        assert_eq!(once, twice);
    }

    // Hand-enumerated oracle: identity mapping, N=2, k=2, train 1011.
    // Node 0 reads bits (1,0) -> address 0b01; node 1 reads (1,1) -> 0b11.
    // Query 1010: node 0 addresses 0b01 (trained), node 1 addresses 0b01
    // (untrained) -> response 1.
    #[test]
    fn two_node_hand_enumeration() {
        let mapping = InputMapping::from_assignment(4, 2, vec![0, 1, 2, 3]).unwrap();
        let mut d = new_discriminator(mapping);
        let trained = BitPattern::from_bits(4, 1, &[true, false, true, true]).unwrap();
        d.train(&trained).unwrap();
        let query = BitPattern::from_bits(4, 1, &[true, false, true, false]).unwrap();
        assert_eq!(d.respond(&query).unwrap(), 1);
        assert_eq!(d.respond(&trained).unwrap(), 2);
    }

    #[test]
    fn respond_rejects_length_mismatch() {
        let d = new_discriminator(make_input_mapping(64, 4, 5).unwrap());
        let err = d.respond(&random_pattern(4, 4, 0)).unwrap_err();
        assert!(matches!(
            err,
            Error::Dimension {
                expected: 64,
                got: 16
            }
        ));
    }

    #[test]
    fn flipped_bits_bound_the_response_drop() {
        let mapping = make_input_mapping(400, 3, 9).unwrap();
        let k = mapping.node_count() as u32;
        let mut d = new_discriminator(mapping);
        let p = random_pattern(20, 20, 4);
        d.train(&p).unwrap();
        for m in [1usize, 5, 20, 100] {
            let mut q = p.clone();
            for i in 0..m {
                q.flip(i * 3); // distinct positions
            }
            let r = d.respond(&q).unwrap();
            assert!(r <= k);
            assert!(r >= k.saturating_sub(m as u32), "m={m} r={r} k={k}");
        }
    }

    #[test]
    fn partition_full_and_empty() {
        let (inner, outer) = partition_central_peripheral(10, 10, 1.0);
        assert_eq!(inner.len(), 100);
        assert!(outer.is_empty());
        let (inner, outer) = partition_central_peripheral(10, 10, 0.0);
        assert!(inner.is_empty());
        assert_eq!(outer.len(), 100);
    }

    #[test]
    fn partition_quarter_area_keeps_aspect() {
        let (inner, outer) = partition_central_peripheral(40, 20, 0.25);
        assert_eq!(inner.len(), 200); // 20 x 10 centered rectangle
        assert_eq!(outer.len(), 600);
        // centered: spans x in [10, 30), y in [5, 15)
        let xs: Vec<u32> = inner.iter().map(|&i| (i % 40) as u32).collect();
        let ys: Vec<u32> = inner.iter().map(|&i| (i / 40) as u32).collect();
        assert_eq!(*xs.iter().min().unwrap(), 10);
        assert_eq!(*xs.iter().max().unwrap(), 29);
        assert_eq!(*ys.iter().min().unwrap(), 5);
        assert_eq!(*ys.iter().max().unwrap(), 14);
    }

    #[test]
    fn partition_sets_are_disjoint_and_complete() {
        for p in [0.1, 0.3, 0.37, 0.5, 0.8] {
            let (inner, outer) = partition_central_peripheral(13, 7, p);
            let mut all: Vec<usize> = inner.iter().chain(outer.iter()).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..13 * 7).collect::<Vec<_>>());
            assert!(inner.len() as f64 <= p * 91.0 + 1e-9);
        }
    }

    #[test]
    fn parallel_response_is_sum_of_standalone_parts() {
        let (w, h, p, seed) = (20, 10, 0.37, 21u64);
        let mut pd = ParallelDiscriminator::new(w, h, p, 3, 15, seed).unwrap();
        let trained = random_pattern(w, h, 1);
        pd.train(&trained).unwrap();

        // independent route: project bits and run standalone discriminators
        let (inner_idx, outer_idx) = partition_central_peripheral(w, h, p);
        let project = |pattern: &BitPattern, idx: &[usize]| -> BitPattern {
            let bits: Vec<bool> = idx.iter().map(|&i| pattern.get(i)).collect();
            BitPattern::from_bits(bits.len() as u32, 1, &bits).unwrap()
        };
        let mut d1 = new_discriminator(make_input_mapping(inner_idx.len(), 3, seed).unwrap());
        let mut d2 = new_discriminator(make_input_mapping(outer_idx.len(), 15, seed).unwrap());
        d1.train(&project(&trained, &inner_idx)).unwrap();
        d2.train(&project(&trained, &outer_idx)).unwrap();

        for qseed in 0..50 {
            let q = random_pattern(w, h, 100 + qseed);
            let dr1 = d1.respond(&project(&q, &inner_idx)).unwrap();
            let dr2 = d2.respond(&project(&q, &outer_idx)).unwrap();
            assert_eq!(pd.respond(&q).unwrap(), dr1 + dr2);
        }
        assert_eq!(pd.respond(&trained).unwrap(), pd.max_response());
    }

    #[test]
    fn parallel_degenerates_to_single_network() {
        let (w, h, seed) = (10, 6, 33u64);
        let trained = random_pattern(w, h, 2);
        let query = random_pattern(w, h, 3);

        let mut full = ParallelDiscriminator::new(w, h, 1.0, 3, 15, seed).unwrap();
        assert!(full.outer().is_none());
        full.train(&trained).unwrap();
        let mut single3 = new_discriminator(make_input_mapping(60, 3, seed).unwrap());
        single3.train(&trained).unwrap();
        assert_eq!(
            full.respond(&query).unwrap(),
            single3.respond(&query).unwrap()
        );

        let mut empty = ParallelDiscriminator::new(w, h, 0.0, 3, 15, seed).unwrap();
        assert!(empty.inner().is_none());
        empty.train(&trained).unwrap();
        let mut single15 = new_discriminator(make_input_mapping(60, 15, seed).unwrap());
        single15.train(&trained).unwrap();
        assert_eq!(
            empty.respond(&query).unwrap(),
            single15.respond(&query).unwrap()
        );
    }

    #[test]
    fn parallel_rejects_shape_mismatch() {
        let pd = ParallelDiscriminator::new(10, 6, 0.5, 3, 15, 1).unwrap();
        let err = pd.respond(&random_pattern(6, 10, 0)).unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
    }
}
