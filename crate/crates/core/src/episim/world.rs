// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::{binomial, DiseaseModel, RegionId, RegionTable, SimError, REGION_COUNT};
use crate::wan::{NodeId, WanGraph};

/// Default share of seat capacity actually occupied by travellers.
pub const DEFAULT_RHO: f64 = 0.7;
/// Share of the seed airport's population infected at day 0.
pub const SEED_FRACTION: f64 = 0.1;

const PEOPLE_PER_SEAT: f64 = 2000.0;
const MIN_SYNTHETIC_POPULATION: u64 = 50_000;

const S: usize = 0;
const E: usize = 1;
const IA: usize = 2;
const IT: usize = 3;
const INT: usize = 4;
const R: usize = 5;
/// Compartments whose members may board a flight.
const TRAVELLING: [usize; 5] = [S, E, IA, IT, R];

type Counts = [u64; 6];

/// Catchment population assumed for an airport with no explicit figure.
pub fn synthetic_population(strength: f64) -> u64 {
    ((strength * PEOPLE_PER_SEAT).floor() as u64).max(MIN_SYNTHETIC_POPULATION)
}

/// Parse `iata,population` rows. A first row whose population is not an
/// integer is taken as a header.
pub fn parse_populations(text: &str) -> Result<HashMap<String, u64>, SimError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = HashMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let bad = |message: String| SimError::PopulationTable { line: i + 1, message };
        if record.len() != 2 {
            return Err(bad(format!("expected 2 fields, found {}", record.len())));
        }
        let population = match record[1].parse::<u64>() {
            Ok(p) => p,
            Err(_) if i == 0 => continue,
            Err(_) => return Err(bad(format!("population {:?} is not a non-negative integer", &record[1]))),
        };
        if population == 0 {
            return Err(bad(format!("airport {} has zero population", &record[0])));
        }
        out.insert(record[0].to_string(), population);
    }
    Ok(out)
}

/// Head counts of one subpopulation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Compartments {
    pub s: u64,
    pub e: u64,
    pub i_asym: u64,
    pub i_sym_t: u64,
    pub i_sym_nt: u64,
    pub r: u64,
}

impl Compartments {
    fn from_counts(c: &Counts) -> Self {
        Compartments { s: c[S], e: c[E], i_asym: c[IA], i_sym_t: c[IT], i_sym_nt: c[INT], r: c[R] }
    }

    pub fn total(&self) -> u64 {
        self.s + self.e + self.i_asym + self.i_sym_t + self.i_sym_nt + self.r
    }

    pub fn infectious(&self) -> u64 {
        self.i_asym + self.i_sym_t + self.i_sym_nt
    }
}

/// Transitions counted over one simulated day.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DayStats {
    pub new_exposed: u64,
    pub new_infectious: u64,
}

#[derive(Debug)]
struct Topology {
    iata: Vec<String>,
    region: Vec<RegionId>,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    weights: Vec<f64>,
    /// Running sums of `weights` within each airport's slice.
    cumulative: Vec<f64>,
}

impl Topology {
    fn links(&self, k: NodeId) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }
}

/// Metapopulation state: one subpopulation per airport plus the static
/// travel network. Cloning shares the network.
#[derive(Debug, Clone)]
pub struct World {
    topo: Arc<Topology>,
    rho: f64,
    state: Vec<Counts>,
    next: Vec<Counts>,
}

/// Assemble an all-susceptible world on `graph`.
///
/// Populations come from `populations` by IATA code, falling back to
/// [`synthetic_population`] of the airport's weighted degree.
pub fn build_world(
    graph: &WanGraph,
    populations: &HashMap<String, u64>,
    regions: &RegionTable,
    rho: f64,
) -> Result<World, SimError> {
    check_rho(rho)?;
    let n = graph.node_count();
    let mut unmapped = BTreeSet::new();
    let mut region = Vec::with_capacity(n);
    for airport in graph.airports() {
        match regions.region_of(&airport.country) {
            Some(id) => region.push(id),
            None => {
                unmapped.insert(airport.country.clone());
                region.push(0);
            }
        }
    }
    if !unmapped.is_empty() {
        return Err(SimError::UnmappedCountries(unmapped.into_iter().collect()));
    }

    let mut offsets = Vec::with_capacity(n + 1);
    let (mut targets, mut weights, mut cumulative) = (Vec::new(), Vec::new(), Vec::new());
    offsets.push(0);
    let mut state = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = 0.0;
        for (l, w) in graph.neighbors(k) {
            acc += w;
            targets.push(l);
            weights.push(w);
            cumulative.push(acc);
        }
        offsets.push(targets.len());
        let iata = graph.iata(k);
        let pop = match populations.get(iata) {
            Some(&0) => return Err(SimError::PopulationTable { line: 0, message: format!("airport {iata} has zero population") }),
            Some(&p) => p,
            None => synthetic_population(graph.strength(k)),
        };
        state.push([pop, 0, 0, 0, 0, 0]);
    }
    let topo = Topology {
        iata: graph.airports().iter().map(|a| a.iata.clone()).collect(),
        region,
        offsets,
        targets,
        weights,
        cumulative,
    };
    Ok(World { topo: Arc::new(topo), rho, next: vec![[0; 6]; n], state })
}

fn check_rho(rho: f64) -> Result<(), SimError> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(SimError::BadParameter { name: "rho", value: rho })
    }
}

/// Split `total` by `probs` with largest-remainder rounding. Equal
/// remainders favour the later class.
fn apportion(total: u64, probs: [f64; 3]) -> [u64; 3] {
    let quotas = probs.map(|p| total as f64 * p);
    let mut out = quotas.map(|q| q.floor() as u64);
    let assigned: u64 = out.iter().sum();
    let mut order = [2usize, 1, 0];
    order.sort_by(|&a, &b| {
        let (fa, fb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
        if (fa - fb).abs() <= 1e-9 {
            b.cmp(&a)
        } else {
            fb.total_cmp(&fa)
        }
    });
    for &i in order.iter().take(total.saturating_sub(assigned) as usize) {
        out[i] += 1;
    }
    out
}

impl World {
    pub fn airport_count(&self) -> usize {
        self.state.len()
    }

    pub fn iata(&self, k: NodeId) -> &str {
        &self.topo.iata[k]
    }

    pub fn region(&self, k: NodeId) -> RegionId {
        self.topo.region[k]
    }

    pub fn compartments(&self, k: NodeId) -> Compartments {
        Compartments::from_counts(&self.state[k])
    }

    pub fn population(&self, k: NodeId) -> u64 {
        self.state[k].iter().sum()
    }

    pub fn total_population(&self) -> u64 {
        self.state.iter().flatten().sum()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn with_rho(mut self, rho: f64) -> Result<Self, SimError> {
        check_rho(rho)?;
        self.rho = rho;
        Ok(self)
    }

    /// Whether anyone is latent or infectious anywhere.
    pub fn has_active_infection(&self) -> bool {
        self.state.iter().any(|c| c[E] + c[IA] + c[IT] + c[INT] > 0)
    }

    /// Current population and infectious count of every region.
    pub fn regional_totals(&self) -> ([u64; REGION_COUNT], [u64; REGION_COUNT]) {
        let (mut pop, mut inf) = ([0u64; REGION_COUNT], [0u64; REGION_COUNT]);
        for (k, c) in self.state.iter().enumerate() {
            let r = self.topo.region[k] as usize - 1;
            pop[r] += c.iter().sum::<u64>();
            inf[r] += c[IA] + c[IT] + c[INT];
        }
        (pop, inf)
    }

    /// Copy of this world with a tenth of `airport`'s population moved from
    /// susceptible into the infectious classes.
    pub fn seed_outbreak(&self, airport: NodeId, disease: &DiseaseModel) -> Result<World, SimError> {
        if airport >= self.airport_count() {
            return Err(SimError::UnknownAirport(airport));
        }
        let mut world = self.clone();
        let c = &mut world.state[airport];
        let n: u64 = c.iter().sum();
        let infected = ((n as f64 * SEED_FRACTION).floor() as u64).min(c[S]);
        if infected == 0 {
            log::warn!("seed airport {} has population {n}; nobody infected", self.iata(airport));
        }
        let [a, t, nt] = apportion(infected, disease.class_split());
        c[S] -= infected;
        c[IA] += a;
        c[IT] += t;
        c[INT] += nt;
        Ok(world)
    }

    /// Advance one day: travel, then local transmission and progression.
    pub fn step_day<G: Rng + ?Sized>(&mut self, disease: &DiseaseModel, rng: &mut G) -> DayStats {
        self.travel(rng);
        self.epidemic(disease, rng)
    }

    fn travel<G: Rng + ?Sized>(&mut self, rng: &mut G) {
        if self.rho == 0.0 {
            return;
        }
        let rho = self.rho;
        let topo = &*self.topo;
        for c in &mut self.next {
            *c = [0; 6];
        }
        for k in 0..self.state.len() {
            let here = self.state[k];
            let n: u64 = here.iter().sum();
            let links = topo.links(k);
            if n == 0 || links.is_empty() {
                add(&mut self.next[k], &here);
                continue;
            }
            let n = n as f64;
            let weights = &topo.weights[links.clone()];
            let max_w = weights.iter().copied().fold(0.0, f64::max);
            // Below this, every per-link probability is its uncapped
            // `rho * w / n`, so destinations are proportional to weight.
            let proportional = rho * max_w <= n;
            let mass = |w: f64| (rho * w / n).min(1.0);
            let total_mass: f64 = if proportional {
                rho * topo.cumulative[links.end - 1] / n
            } else {
                weights.iter().map(|&w| mass(w)).sum()
            };
            let leave = total_mass.min(1.0);

            let mut stay = here;
            for class in TRAVELLING {
                let movers = binomial(rng, here[class], leave);
                if movers == 0 {
                    continue;
                }
                stay[class] -= movers;
                if proportional && movers * 4 < weights.len() as u64 {
                    let cumulative = &topo.cumulative[links.clone()];
                    let span = cumulative[cumulative.len() - 1];
                    for _ in 0..movers {
                        let u = rng.random::<f64>() * span;
                        let j = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
                        self.next[topo.targets[links.start + j]][class] += 1;
                    }
                } else {
                    let mut left = movers;
                    let mut rest = total_mass;
                    for (j, &w) in weights.iter().enumerate() {
                        let m = mass(w);
                        let q = if j + 1 == weights.len() { 1.0 } else { m / rest };
                        let go = binomial(rng, left, q);
                        self.next[topo.targets[links.start + j]][class] += go;
                        left -= go;
                        rest -= m;
                        if left == 0 {
                            break;
                        }
                    }
                }
            }
            add(&mut self.next[k], &stay);
        }
        std::mem::swap(&mut self.state, &mut self.next);
    }

    fn epidemic<G: Rng + ?Sized>(&mut self, disease: &DiseaseModel, rng: &mut G) -> DayStats {
        let [p_a, p_t, p_nt] = disease.class_split();
        let p_progress = -(-disease.epsilon).exp_m1();
        let p_recover = -(-disease.mu).exp_m1();
        let mut stats = DayStats::default();
        for c in &mut self.state {
            let n: u64 = c.iter().sum();
            if n == 0 || c[E] + c[IA] + c[IT] + c[INT] == 0 {
                continue;
            }
            let pressure = c[IT] as f64 + c[INT] as f64 + disease.r_beta * c[IA] as f64;
            let lambda = disease.beta * pressure / n as f64;
            let exposed = binomial(rng, c[S], -(-lambda).exp_m1());
            let onset = binomial(rng, c[E], p_progress);
            let to_a = binomial(rng, onset, p_a);
            let sym = p_t + p_nt;
            let to_t = if sym > 0.0 { binomial(rng, onset - to_a, p_t / sym) } else { 0 };
            let to_nt = onset - to_a - to_t;
            let rec = [binomial(rng, c[IA], p_recover), binomial(rng, c[IT], p_recover), binomial(rng, c[INT], p_recover)];

            c[S] -= exposed;
            c[E] = c[E] + exposed - onset;
            c[IA] = c[IA] + to_a - rec[0];
            c[IT] = c[IT] + to_t - rec[1];
            c[INT] = c[INT] + to_nt - rec[2];
            c[R] += rec.iter().sum::<u64>();
            stats.new_exposed += exposed;
            stats.new_infectious += onset;
        }
        stats
    }
}

fn add(into: &mut Counts, from: &Counts) {
    for (a, b) in into.iter_mut().zip(from) {
        *a += b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::wan::graph::tests::airport;

    pub(crate) fn two_airports(w: f64) -> WanGraph {
        WanGraph::from_edges(vec![airport("AAA", "France"), airport("BBB", "Japan")], &[(0, 1, w)]).unwrap()
    }

    fn pops(entries: &[(&str, u64)]) -> HashMap<String, u64> {
        entries.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn initial_world_is_susceptible() {
        let w = build_world(&two_airports(10.0), &pops(&[("AAA", 1000), ("BBB", 2000)]), &RegionTable::bundled(), 0.7)
            .unwrap();
        assert_eq!(w.compartments(0), Compartments { s: 1000, ..Default::default() });
        assert_eq!(w.compartments(1), Compartments { s: 2000, ..Default::default() });
        assert_eq!((w.region(0), w.region(1)), (6, 14));
    }

    #[test]
    fn synthetic_rule() {
        assert_eq!(synthetic_population(500.0), 1_000_000);
        assert_eq!(synthetic_population(3.0), 50_000);
        let w = build_world(&two_airports(500.0), &HashMap::new(), &RegionTable::bundled(), 0.7).unwrap();
        assert_eq!(w.population(0), 1_000_000);
    }

    #[test]
    fn unmapped_countries_are_listed() {
        let g = WanGraph::from_edges(
            vec![airport("AAA", "Atlantis"), airport("BBB", "Lemuria"), airport("CCC", "France")],
            &[(0, 1, 1.0), (1, 2, 1.0)],
        )
        .unwrap();
        match build_world(&g, &HashMap::new(), &RegionTable::bundled(), 0.7) {
            Err(SimError::UnmappedCountries(c)) => assert_eq!(c, vec!["Atlantis", "Lemuria"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn population_csv() {
        let p = parse_populations("iata,population\nAAA, 1000\nBBB,2000\n").unwrap();
        assert_eq!(p["AAA"], 1000);
        assert_eq!(p.len(), 2);
        assert!(parse_populations("AAA,0\n").is_err());
        assert!(parse_populations("AAA,10\nBBB,x\n").is_err());
    }

    #[test]
    fn seeding_splits_by_largest_remainder() {
        let g = two_airports(1.0);
        let w = build_world(&g, &pops(&[("AAA", 1000), ("BBB", 5)]), &RegionTable::bundled(), 0.7).unwrap();
        let s = w.seed_outbreak(0, &DiseaseModel::simple_seir(0.5)).unwrap();
        assert_eq!(s.compartments(0), Compartments { s: 900, i_sym_t: 100, ..Default::default() });
        let f = w.seed_outbreak(0, &DiseaseModel::full(0.5)).unwrap();
        assert_eq!(f.compartments(0), Compartments { s: 900, i_asym: 33, i_sym_t: 33, i_sym_nt: 34, ..Default::default() });
        assert_eq!(f.compartments(1), w.compartments(1));
        let tiny = w.seed_outbreak(1, &DiseaseModel::full(0.5)).unwrap();
        assert_eq!(tiny.compartments(1).infectious(), 0);
        assert!(matches!(w.seed_outbreak(2, &DiseaseModel::full(0.5)), Err(SimError::UnknownAirport(2))));
    }

    #[test]
    fn apportion_sums() {
        for total in [0u64, 1, 7, 100, 12345] {
            for probs in [[0.33, 0.335, 0.335], [0.0, 1.0, 0.0], [0.2, 0.3, 0.5], [1.0 / 3.0; 3]] {
                assert_eq!(apportion(total, probs).iter().sum::<u64>(), total);
            }
        }
        assert_eq!(apportion(2, [1.0 / 3.0; 3]), [0, 1, 1]);
    }

    #[test]
    fn quiet_world_is_unchanged() {
        let w = build_world(&two_airports(10.0), &pops(&[("AAA", 1000), ("BBB", 2000)]), &RegionTable::bundled(), 0.0)
            .unwrap();
        let mut v = w.clone();
        let mut rng = stream(1, "t", &[]);
        for _ in 0..10 {
            assert_eq!(v.step_day(&DiseaseModel::full(0.8), &mut rng), DayStats::default());
        }
        assert_eq!(v.state, w.state);
    }

    #[test]
    fn exposure_mean_matches_binomial() {
        // One airport with S=1000 and 100 symptomatic infectious, N = 1100.
        let g = two_airports(1.0);
        let base = build_world(&g, &pops(&[("AAA", 1100), ("BBB", 1000)]), &RegionTable::bundled(), 0.0).unwrap();
        let seeded = base.seed_outbreak(0, &DiseaseModel::simple_seir(0.8383)).unwrap();
        assert_eq!(seeded.compartments(0).i_sym_t, 110);
        let mut world = base.clone();
        world.state[0] = [1000, 0, 0, 100, 0, 0];
        let d = DiseaseModel::simple_seir(0.8383);
        let expected = 1000.0 * -(-0.8383f64 * 100.0 / 1100.0).exp_m1();
        let mut rng = stream(2, "t", &[]);
        let draws = 10_000;
        let total: u64 = (0..draws).map(|_| world.clone().step_day(&d, &mut rng).new_exposed).sum();
        let mean = total as f64 / draws as f64;
        assert!((expected - 73.4).abs() < 0.05);
        assert!((mean - expected).abs() < 1.0, "{mean} vs {expected}");
    }

    #[test]
    fn travel_mean_matches_expectation() {
        // rho * w / N = 0.7 * 1000/7 / 10_000 = 0.01 on both sides.
        let g = two_airports(1000.0 / 7.0);
        let base = build_world(&g, &pops(&[("AAA", 10_000), ("BBB", 10_000)]), &RegionTable::bundled(), 0.7).unwrap();
        let mut rng = stream(3, "t", &[]);
        let days = 5000;
        let mut moved = 0u64;
        for _ in 0..days {
            let mut w = base.clone();
            w.state[0] = [1000, 0, 0, 0, 0, 9000];
            w.state[1] = [0, 0, 0, 0, 0, 10_000];
            w.travel(&mut rng);
            moved += w.state[1][S];
            assert_eq!(w.total_population(), 20_000);
        }
        let mean = moved as f64 / days as f64;
        // sd of the mean is about sqrt(9.9) / sqrt(5000) = 0.045
        assert!((mean - 10.0).abs() < 0.2, "{mean}");
    }

    #[test]
    fn grounded_class_never_travels() {
        let g = two_airports(1e6);
        let base = build_world(&g, &pops(&[("AAA", 1000), ("BBB", 1000)]), &RegionTable::bundled(), 1.0).unwrap();
        let mut w = base.clone();
        w.state[0] = [0, 0, 0, 0, 1000, 0];
        let mut rng = stream(4, "t", &[]);
        w.travel(&mut rng);
        assert_eq!(w.state[0][INT], 1000);
        // Capped probabilities: everyone at BBB leaves.
        assert_eq!(w.state[1], [0; 6]);
        assert_eq!(w.state[0][S], 1000);
    }
}
