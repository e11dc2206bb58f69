// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Scenario data model: the file library, clients with side information,
//! femtocaches with their coverage disks, and the macrocell around them.

use std::f64::consts::PI;
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Zero-based index into the file library. Text formats print it 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FileId(pub usize);

impl fmt::Display for FileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0 + 1)
    }
}

/// Position in meters; the MBS sits at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_sq(other).sqrt()
    }

    /// Uniform sample over the disk of radius `radius` centred at the origin.
    pub fn uniform_in_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Self {
        let r = radius * rng.gen::<f64>().sqrt();
        let theta = 2.0 * PI * rng.gen::<f64>();
        Point::new(r * theta.cos(), r * theta.sin())
    }
}

/// Set of files, stored as a bitset over the library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileSet(FixedBitSet);

impl FileSet {
    pub fn empty(num_files: usize) -> Self {
        FileSet(FixedBitSet::with_capacity(num_files))
    }

    pub fn from_files(num_files: usize, files: impl IntoIterator<Item = FileId>) -> Self {
        let mut s = FileSet::empty(num_files);
        for f in files {
            s.insert(f);
        }
        s
    }

    pub fn insert(&mut self, f: FileId) {
        self.0.grow(f.0 + 1);
        self.0.insert(f.0);
    }

    #[inline]
    pub fn contains(&self, f: FileId) -> bool {
        self.0.contains(f.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = FileId> + '_ {
        self.0.ones().map(FileId)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Client {
    pub id: usize,
    pub position: Point,
    pub has: FileSet,
    pub wants: FileId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Femtocache {
    pub id: usize,
    pub position: Point,
    pub radius: f64,
    pub cache: FileSet,
}

impl Femtocache {
    #[inline]
    pub fn covers(&self, p: &Point) -> bool {
        // boundary counts as covered
        self.position.distance_sq(p) <= self.radius * self.radius
    }
}

/// Full problem instance. Immutable once validated.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    num_files: usize,
    clients: Vec<Client>,
    fcs: Vec<Femtocache>,
    mbs_radius: f64,
    rng_seed: u64,
}

const GEOMETRY_EPS: f64 = 1e-9;

impl Scenario {
    pub fn new(
        num_files: usize,
        clients: Vec<Client>,
        fcs: Vec<Femtocache>,
        mbs_radius: f64,
        rng_seed: u64,
    ) -> Result<Self> {
        if num_files == 0 {
            return Err(Error::InvalidConfiguration("library must hold at least one file".into()));
        }
        if !(mbs_radius >= 0.0) {
            return Err(Error::InvalidConfiguration(format!("bad MBS radius {mbs_radius}")));
        }
        for (idx, c) in clients.iter().enumerate() {
            if c.id != idx {
                return Err(Error::InvalidInput(format!("client ids must be dense, got {} at {idx}", c.id)));
            }
            if c.wants.0 >= num_files || c.has.iter().any(|f| f.0 >= num_files) {
                return Err(Error::InvalidInput(format!("client {} references a file outside the library", idx + 1)));
            }
            if c.has.contains(c.wants) {
                return Err(Error::InvalidInput(format!("client {} already has its wanted file", idx + 1)));
            }
            if c.position.distance(&Point::ORIGIN) > mbs_radius + GEOMETRY_EPS {
                return Err(Error::InvalidInput(format!("client {} lies outside the macrocell", idx + 1)));
            }
        }
        for (idx, fc) in fcs.iter().enumerate() {
            if fc.id != idx {
                return Err(Error::InvalidInput(format!("femtocache ids must be dense, got {} at {idx}", fc.id)));
            }
            if fc.cache.iter().any(|f| f.0 >= num_files) {
                return Err(Error::InvalidInput(format!("femtocache {} caches a file outside the library", idx + 1)));
            }
            if !(fc.radius >= 0.0) {
                return Err(Error::InvalidInput(format!("femtocache {} has a bad radius", idx + 1)));
            }
        }
        if let Some(first) = fcs.first() {
            if fcs.iter().any(|fc| fc.cache.len() != first.cache.len()) {
                return Err(Error::InvalidInput("all femtocaches must cache the same number of files".into()));
            }
            if fcs.iter().any(|fc| fc.radius != first.radius) {
                return Err(Error::InvalidInput("all femtocaches must share one coverage radius".into()));
            }
        }
        Ok(Scenario { num_files, clients, fcs, mbs_radius, rng_seed })
    }

    pub fn num_files(&self) -> usize {
        self.num_files
    }

    pub fn clients(&self) -> &[Client] {
        &self.clients
    }

    pub fn fcs(&self) -> &[Femtocache] {
        &self.fcs
    }

    pub fn mbs_radius(&self) -> f64 {
        self.mbs_radius
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn num_clients(&self) -> usize {
        self.clients.len()
    }

    pub fn num_fcs(&self) -> usize {
        self.fcs.len()
    }

    /// Clients within the coverage disk of `fc`, in id order.
    pub fn coverage_set(&self, fc: &Femtocache) -> Vec<usize> {
        self.clients
            .iter()
            .filter(|c| fc.covers(&c.position))
            .map(|c| c.id)
            .collect()
    }

    /// Coverage of every femtocache as client bitsets.
    pub fn coverage(&self) -> Vec<FixedBitSet> {
        self.fcs
            .iter()
            .map(|fc| {
                let mut s = FixedBitSet::with_capacity(self.clients.len());
                for c in &self.clients {
                    if fc.covers(&c.position) {
                        s.insert(c.id);
                    }
                }
                s
            })
            .collect()
    }

    /// Whether `fc` can serve `client`: the client is covered and its file cached.
    pub fn can_serve(&self, fc: usize, client: usize) -> bool {
        let fc = &self.fcs[fc];
        let c = &self.clients[client];
        fc.cache.contains(c.wants) && fc.covers(&c.position)
    }

    /// Distinct files wanted by `clients`, ascending.
    pub fn distinct_wants(&self, clients: impl IntoIterator<Item = usize>) -> Vec<FileId> {
        let mut seen = FixedBitSet::with_capacity(self.num_files);
        for j in clients {
            seen.insert(self.clients[j].wants.0);
        }
        seen.ones().map(FileId).collect()
    }

    /// Writes the line-oriented scenario format. Ids and files are 1-based.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("files {}\n", self.num_files));
        out.push_str(&format!("mbs_radius {}\n", self.mbs_radius));
        out.push_str(&format!("seed {}\n", self.rng_seed));
        for fc in &self.fcs {
            out.push_str(&format!(
                "fc {} {} {} r={} cache={}\n",
                fc.id + 1,
                fc.position.x,
                fc.position.y,
                fc.radius,
                join_files(&fc.cache)
            ));
        }
        for c in &self.clients {
            out.push_str(&format!(
                "client {} {} {} wants={} has={}\n",
                c.id + 1,
                c.position.x,
                c.position.y,
                c.wants.0 + 1,
                join_files(&c.has)
            ));
        }
        out
    }

    /// Parses the format written by [`Scenario::to_text`]. Blank lines and
    /// `#` comments are skipped; errors carry the 1-based line number.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut num_files: Option<usize> = None;
        let mut mbs_radius: Option<f64> = None;
        let mut seed = 0u64;
        let mut clients = Vec::new();
        let mut fcs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |message: String| Error::Parse { line: line_no, message };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "files" => {
                    let v = tokens.get(1).ok_or_else(|| perr("missing file count".into()))?;
                    num_files = Some(v.parse().map_err(|_| perr(format!("bad file count `{v}`")))?);
                }
                "mbs_radius" => {
                    let v = tokens.get(1).ok_or_else(|| perr("missing radius".into()))?;
                    mbs_radius = Some(v.parse().map_err(|_| perr(format!("bad radius `{v}`")))?);
                }
                "seed" => {
                    let v = tokens.get(1).ok_or_else(|| perr("missing seed".into()))?;
                    seed = v.parse().map_err(|_| perr(format!("bad seed `{v}`")))?;
                }
                "fc" | "client" => {
                    let f = num_files.ok_or_else(|| perr("`files` must precede nodes".into()))?;
                    if tokens.len() != 6 {
                        return Err(perr(format!("expected 6 fields, found {}", tokens.len())));
                    }
                    let id: usize = tokens[1].parse().map_err(|_| perr(format!("bad id `{}`", tokens[1])))?;
                    let x: f64 = tokens[2].parse().map_err(|_| perr(format!("bad x `{}`", tokens[2])))?;
                    let y: f64 = tokens[3].parse().map_err(|_| perr(format!("bad y `{}`", tokens[3])))?;
                    if id == 0 {
                        return Err(perr("ids are 1-based".into()));
                    }
                    if tokens[0] == "fc" {
                        let r = keyed(tokens[4], "r").ok_or_else(|| perr("expected r=<radius>".into()))?;
                        let radius: f64 = r.parse().map_err(|_| perr(format!("bad radius `{r}`")))?;
                        let cache = keyed(tokens[5], "cache").ok_or_else(|| perr("expected cache=<files>".into()))?;
                        let cache = parse_files(cache, f).map_err(perr)?;
                        if id != fcs.len() + 1 {
                            return Err(perr(format!("femtocache id {id} out of sequence")));
                        }
                        fcs.push(Femtocache { id: id - 1, position: Point::new(x, y), radius, cache });
                    } else {
                        let w = keyed(tokens[4], "wants").ok_or_else(|| perr("expected wants=<file>".into()))?;
                        let wants: usize = w.parse().map_err(|_| perr(format!("bad file `{w}`")))?;
                        if wants == 0 || wants > f {
                            return Err(perr(format!("file {wants} outside library 1..={f}")));
                        }
                        let has = keyed(tokens[5], "has").ok_or_else(|| perr("expected has=<files>".into()))?;
                        let has = parse_files(has, f).map_err(perr)?;
                        if id != clients.len() + 1 {
                            return Err(perr(format!("client id {id} out of sequence")));
                        }
                        clients.push(Client {
                            id: id - 1,
                            position: Point::new(x, y),
                            has,
                            wants: FileId(wants - 1),
                        });
                    }
                }
                other => return Err(perr(format!("unknown record `{other}`"))),
            }
        }
        let num_files = num_files.ok_or(Error::Parse { line: 0, message: "missing `files` line".into() })?;
        let mbs_radius = mbs_radius.ok_or(Error::Parse { line: 0, message: "missing `mbs_radius` line".into() })?;
        Scenario::new(num_files, clients, fcs, mbs_radius, seed)
    }
}

fn keyed<'a>(token: &'a str, key: &str) -> Option<&'a str> {
    token.strip_prefix(key)?.strip_prefix('=')
}

fn parse_files(list: &str, num_files: usize) -> std::result::Result<FileSet, String> {
    let mut set = FileSet::empty(num_files);
    for item in list.split(',').filter(|s| !s.is_empty()) {
        let k: usize = item.parse().map_err(|_| format!("bad file `{item}`"))?;
        if k == 0 || k > num_files {
            return Err(format!("file {k} outside library 1..={num_files}"));
        }
        set.insert(FileId(k - 1));
    }
    Ok(set)
}

fn join_files(set: &FileSet) -> String {
    set.iter().map(|f| (f.0 + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// `round(x)` with halves rounded up, tolerant of binary representation noise.
pub fn round_half_up(x: f64) -> usize {
    (x + 0.5 + 1e-9).floor().max(0.0) as usize
}

/// Cache assignment produced by systematic fixed placement.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacementPlan {
    pub caches: Vec<FileSet>,
    num_files: usize,
    cache_size: usize,
}

impl PlacementPlan {
    pub fn num_files(&self) -> usize {
        self.num_files
    }

    pub fn cache_size(&self) -> usize {
        self.cache_size
    }

    /// Repetition index R = H_c C / F as a reduced fraction.
    pub fn repetition_ratio(&self) -> (usize, usize) {
        let num = self.cache_size * self.caches.len();
        let g = gcd(num, self.num_files);
        (num / g, self.num_files / g)
    }

    pub fn repetition_index(&self) -> f64 {
        (self.cache_size * self.caches.len()) as f64 / self.num_files as f64
    }

    /// R when it is an integer.
    pub fn integer_repetition(&self) -> Option<usize> {
        match self.repetition_ratio() {
            (r, 1) => Some(r),
            _ => None,
        }
    }

    /// B = C / R, the number of femtocaches' worth of full library copies.
    pub fn full_copies(&self) -> f64 {
        self.num_files as f64 / self.cache_size as f64
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Fills caches in order with consecutive library files, wrapping to the
/// first file when the library runs out.
pub fn systematic_placement(num_files: usize, num_fcs: usize, cache_size: usize) -> Result<PlacementPlan> {
    if num_files == 0 || num_fcs == 0 {
        return Err(Error::InvalidConfiguration("placement needs F >= 1 and C >= 1".into()));
    }
    if cache_size == 0 || cache_size > num_files {
        return Err(Error::InvalidConfiguration(format!(
            "cache size {cache_size} must lie in 1..={num_files}"
        )));
    }
    let caches = (0..num_fcs)
        .map(|i| FileSet::from_files(num_files, (0..cache_size).map(|s| FileId((i * cache_size + s) % num_files))))
        .collect();
    Ok(PlacementPlan { caches, num_files, cache_size })
}

#[derive(Clone, Debug, PartialEq)]
pub enum FcLayout {
    /// Positions drawn uniformly over the macrocell disk.
    UniformRandom,
    Fixed(Vec<Point>),
}

/// Parameters for drawing a random scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    pub num_files: usize,
    pub num_fcs: usize,
    pub num_clients: usize,
    pub sigma_u: f64,
    pub sigma_c: f64,
    pub fc_radius: f64,
    pub mbs_radius: f64,
    pub fc_layout: FcLayout,
    pub seed: u64,
}

impl ScenarioParams {
    pub fn has_size(&self) -> usize {
        round_half_up(self.sigma_u * self.num_files as f64)
    }

    pub fn cache_size(&self) -> usize {
        round_half_up(self.sigma_c * self.num_files as f64)
    }

    pub fn full_coverage(&self) -> bool {
        self.fc_radius >= 2.0 * self.mbs_radius
    }
}

/// Draws a scenario. The draw order (femtocache positions, then per client
/// position, wanted file and Has set) does not depend on any radius, so two
/// parameter sets differing only in `fc_radius` share their client layout.
pub fn generate_scenario(params: &ScenarioParams) -> Result<Scenario> {
    let f = params.num_files;
    if f == 0 {
        return Err(Error::InvalidConfiguration("library must hold at least one file".into()));
    }
    for (name, s) in [("sigma_u", params.sigma_u), ("sigma_c", params.sigma_c)] {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidConfiguration(format!("{name} = {s} outside [0, 1]")));
        }
    }
    let has_size = params.has_size();
    if has_size >= f {
        return Err(Error::InvalidConfiguration(format!(
            "Has sets of {has_size} files leave no room for a distinct wanted file in a library of {f}"
        )));
    }
    if !(params.fc_radius >= 0.0) || !(params.mbs_radius >= 0.0) {
        return Err(Error::InvalidConfiguration("radii must be non-negative".into()));
    }
    let caches = if params.num_fcs > 0 {
        systematic_placement(f, params.num_fcs, params.cache_size())?.caches
    } else {
        Vec::new()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let positions: Vec<Point> = match &params.fc_layout {
        FcLayout::UniformRandom => (0..params.num_fcs)
            .map(|_| Point::uniform_in_disk(&mut rng, params.mbs_radius))
            .collect(),
        FcLayout::Fixed(points) => {
            if points.len() != params.num_fcs {
                return Err(Error::InvalidConfiguration(format!(
                    "{} fixed positions given for {} femtocaches",
                    points.len(),
                    params.num_fcs
                )));
            }
            points.clone()
        }
    };
    let fcs = caches
        .into_iter()
        .zip(positions)
        .enumerate()
        .map(|(id, (cache, position))| Femtocache { id, position, radius: params.fc_radius, cache })
        .collect();

    let clients = (0..params.num_clients)
        .map(|id| {
            let position = Point::uniform_in_disk(&mut rng, params.mbs_radius);
            let wants = FileId(rng.gen_range(0..f));
            // Has set: uniform subset of the other F - 1 files.
            let has = FileSet::from_files(
                f,
                index::sample(&mut rng, f - 1, has_size)
                    .into_iter()
                    .map(|s| FileId(if s >= wants.0 { s + 1 } else { s })),
            );
            Client { id, position, has, wants }
        })
        .collect();

    Scenario::new(f, clients, fcs, params.mbs_radius, params.seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_params(seed: u64) -> ScenarioParams {
        ScenarioParams {
            num_files: 10,
            num_fcs: 2,
            num_clients: 20,
            sigma_u: 0.1,
            sigma_c: 0.7,
            fc_radius: 50.0,
            mbs_radius: 60.0,
            fc_layout: FcLayout::UniformRandom,
            seed,
        }
    }

    fn lone_fc(radius: f64) -> Femtocache {
        Femtocache { id: 0, position: Point::ORIGIN, radius, cache: FileSet::empty(1) }
    }

    #[test]
    fn coverage_boundary_is_inclusive() {
        let fc = lone_fc(50.0);
        assert!(fc.covers(&Point::new(30.0, 40.0)));
        assert!(!fc.covers(&Point::new(30.0, 40.001)));
    }

    #[test]
    fn zero_radius_covers_its_own_position() {
        assert!(lone_fc(0.0).covers(&Point::ORIGIN));
    }

    #[test]
    fn coverage_matches_direct_distances() {
        let s = generate_scenario(&small_params(7)).unwrap();
        for fc in s.fcs() {
            let expected: Vec<usize> = s
                .clients()
                .iter()
                .filter(|c| {
                    let d = ((c.position.x - fc.position.x).powi(2) + (c.position.y - fc.position.y).powi(2)).sqrt();
                    d <= fc.radius
                })
                .map(|c| c.id)
                .collect();
            assert_eq!(s.coverage_set(fc), expected);
        }
    }

    #[test]
    fn placement_appendix_example() {
        let p = systematic_placement(3, 2, 3).unwrap();
        let all: Vec<FileId> = (0..3).map(FileId).collect();
        assert_eq!(p.caches[0].iter().collect::<Vec<_>>(), all);
        assert_eq!(p.caches[1].iter().collect::<Vec<_>>(), all);
        assert_eq!(p.integer_repetition(), Some(2));
    }

    #[test]
    fn placement_wraps_around() {
        let p = systematic_placement(10, 2, 6).unwrap();
        assert_eq!(p.caches[0].iter().map(|f| f.0).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(p.caches[1].iter().map(|f| f.0).collect::<Vec<_>>(), vec![0, 1, 6, 7, 8, 9]);
        assert_eq!(p.repetition_ratio(), (6, 5));
        assert!((p.repetition_index() - 1.2).abs() < 1e-12);
        assert_eq!(p.integer_repetition(), None);
    }

    #[test]
    fn placement_counts_copies() {
        let p = systematic_placement(10, 4, 5).unwrap();
        for k in 0..10 {
            let copies = p.caches.iter().filter(|c| c.contains(FileId(k))).count();
            assert_eq!(copies, 2, "file {k}");
        }
        assert_eq!(p.integer_repetition(), Some(2));
    }

    #[test]
    fn placement_rejects_oversized_cache() {
        assert!(matches!(systematic_placement(5, 2, 6), Err(Error::InvalidConfiguration(_))));
    }

    #[test]
    fn small_network_setting_is_valid() {
        let s = generate_scenario(&small_params(3)).unwrap();
        assert_eq!(s.num_clients(), 20);
        for fc in s.fcs() {
            assert_eq!(fc.cache.len(), 7);
        }
        for c in s.clients() {
            assert_eq!(c.has.len(), 1);
            assert!(!c.has.contains(c.wants));
            assert!(c.position.distance(&Point::ORIGIN) <= 60.0 + 1e-9);
        }
    }

    #[test]
    fn zero_side_information() {
        let mut p = small_params(1);
        p.sigma_u = 0.0;
        let s = generate_scenario(&p).unwrap();
        assert!(s.clients().iter().all(|c| c.has.is_empty()));
    }

    #[test]
    fn full_side_information_is_rejected() {
        let mut p = small_params(1);
        p.sigma_u = 1.0;
        assert!(matches!(generate_scenario(&p), Err(Error::InvalidConfiguration(_))));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_scenario(&small_params(42)).unwrap();
        let b = generate_scenario(&small_params(42)).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        let c = generate_scenario(&small_params(43)).unwrap();
        assert_ne!(a.to_text(), c.to_text());
    }

    #[test]
    fn radius_does_not_perturb_layout() {
        let a = generate_scenario(&small_params(9)).unwrap();
        let mut p = small_params(9);
        p.fc_radius = 500.0;
        let b = generate_scenario(&p).unwrap();
        assert_eq!(a.clients(), b.clients());
        assert!(b.fcs().iter().all(|fc| s_covers_all(&b, fc)));
    }

    fn s_covers_all(s: &Scenario, fc: &Femtocache) -> bool {
        s.coverage_set(fc).len() == s.num_clients()
    }

    #[test]
    fn text_round_trip() {
        let s = generate_scenario(&small_params(5)).unwrap();
        let back = Scenario::from_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn malformed_line_is_reported() {
        let text = "files 3\nmbs_radius 10\nclient 1 0 0 wants=2 has=1\nclient 2 0 zero wants=1 has=\n";
        match Scenario::from_text(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn wanted_file_in_has_set_is_rejected() {
        let text = "files 3\nmbs_radius 10\nclient 1 0 0 wants=2 has=2\n";
        assert!(matches!(Scenario::from_text(text), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn round_half_up_is_exact_on_halves() {
        assert_eq!(round_half_up(0.35 * 10.0), 4);
        assert_eq!(round_half_up(2.5), 3);
        assert_eq!(round_half_up(0.7 * 10.0), 7);
        assert_eq!(round_half_up(2.49), 2);
    }
}
