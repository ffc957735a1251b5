//! Check records, the identity registry, and deterministic report output.

use serde::Serialize;

/// How a measurement is compared with its expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Relation {
    /// `|measured − expected| ≤ tol`.
    Near { expected: f64, tol: f64 },
    /// `measured < bound`.
    Below { bound: f64 },
    /// `measured ≥ bound`.
    AtLeast { bound: f64 },
    /// `lo ≤ measured ≤ hi`.
    Within { lo: f64, hi: f64 },
}

impl Relation {
    pub fn holds(&self, m: f64) -> bool {
        if !m.is_finite() {
            return false;
        }
        match *self {
            Relation::Near { expected, tol } => (m - expected).abs() <= tol,
            Relation::Below { bound } => m < bound,
            Relation::AtLeast { bound } => m >= bound,
            Relation::Within { lo, hi } => lo <= m && m <= hi,
        }
    }

    pub fn expected(&self) -> String {
        match *self {
            Relation::Near { expected, tol } => format!("{expected} ± {tol:e}"),
            Relation::Below { bound } => format!("< {bound:e}"),
            Relation::AtLeast { bound } => format!(">= {bound}"),
            Relation::Within { lo, hi } => format!("[{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub measured: f64,
    pub relation: Relation,
    pub pass: bool,
    /// The identity under test, from [`ANCHORS`].
    pub anchor: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, measured: f64, relation: Relation, key: &str) -> Self {
        CheckRecord {
            name: name.into(),
            measured,
            pass: relation.holds(measured),
            relation,
            anchor: anchor(key),
            note: None,
        }
    }

    pub fn near(name: impl Into<String>, m: f64, expected: f64, tol: f64, key: &str) -> Self {
        Self::new(name, m, Relation::Near { expected, tol }, key)
    }

    pub fn below(name: impl Into<String>, m: f64, bound: f64, key: &str) -> Self {
        Self::new(name, m, Relation::Below { bound }, key)
    }

    pub fn at_least(name: impl Into<String>, m: f64, bound: f64, key: &str) -> Self {
        Self::new(name, m, Relation::AtLeast { bound }, key)
    }

    pub fn within(name: impl Into<String>, m: f64, lo: f64, hi: f64, key: &str) -> Self {
        Self::new(name, m, Relation::Within { lo, hi }, key)
    }

    /// Integer equality.
    pub fn exact(name: impl Into<String>, m: i64, expected: i64, key: &str) -> Self {
        Self::near(name, m as f64, expected as f64, 0.0, key)
    }

    /// A failed computation, recorded as a failing check.
    pub fn error(name: impl Into<String>, err: &crate::Error, key: &str) -> Self {
        let mut r = Self::new(name, f64::NAN, Relation::Below { bound: 0.0 }, key);
        r.note = Some(err.to_string());
        r
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Identities and bounds that checks refer to, keyed by a short id.
pub const ANCHORS: &[(&str, &str)] = &[
    ("tk_degree", "deg T_k = k^4"),
    ("tk_lip", "Lip T_k = k^2"),
    ("sn_degree", "deg S_n = k^(8n)"),
    ("sn_legendrian", "S_n frame has vanishing (3,3) entry"),
    ("sn_lip", "Lip S_n <= C k^(3n)"),
    ("contact_pde", "1 + dz~/dz - x~ dy~/dz = 0"),
    ("lattice_equivariance", "phi(g p) = g phi(p) for lattice g"),
    ("torus_exponent", "deg mu_k = k^3, Lip mu_k = k"),
    ("product_exponent", "deg mu_k = k, Lip mu_k = k"),
    ("sol_exponent", "deg iota_k = k^2, Lip iota_k = k"),
    ("nil_exponent", "alpha(Nil) = 8/3"),
    ("odd_map", "h(-x) = -h(x), deg h_L = 2 |packing| + 1"),
    ("odd_exponent", "deg h_L >= C L^n, Lip h_L <= C' L"),
    ("disk_area", "Area f(D) = pi sum |a_i|^2 k_i"),
    ("holonomy", "holonomy = C * enclosed area"),
    ("deviation", "Dev(R_theta) = theta, Dev(g o R_-Dev g) = 0"),
    ("linearization", "(g1 f g2)^L = g1 f^L g2"),
    ("hopf_legendrian", "phi_4 sends fibers into the contact planes"),
    ("hopf_c0", "d(x, phi_4(x)) < epsilon"),
    ("hopf_degree", "deg phi_4 = 1"),
    ("hopf_area", "C * Area(phi_2(D_b)) = 2 pi"),
    ("hopf_sector", "C * Area(phi_3(sector theta)) = theta"),
    ("ade_frame", "r_xi pushes (X, Y, Z) to (Z, Y, -X)"),
    ("ade_legendrian", "r_xi is Legendrian and inverse Legendrian"),
    ("volume_bound", "|deg f| <= (Vol M / Vol N) Lip(f)^n"),
    ("dual_degree", "quadrature degree = preimage degree"),
    ("h1_det", "deg f = det(f_#1)^2"),
];

pub fn anchor(key: &str) -> &'static str {
    ANCHORS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .unwrap_or_else(|| panic!("no anchor registered for {key}"))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub records: Vec<CheckRecord>,
    /// Wall-clock seconds per phase; kept out of [`Report::body_json`].
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = CheckRecord>) {
        self.records.extend(rs);
    }

    pub fn time(&mut self, phase: impl Into<String>, seconds: f64) {
        self.timings.push((phase.into(), seconds));
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// Deterministic JSON of the command and records.
    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Body plus a separate `timings` section.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Full<'a> {
            report: &'a Report,
            timings: Vec<Timing<'a>>,
        }
        #[derive(Serialize)]
        struct Timing<'a> {
            phase: &'a str,
            seconds: f64,
        }
        let timings = self.timings.iter().map(|(p, s)| Timing { phase: p, seconds: *s }).collect();
        serde_json::to_string_pretty(&Full { report: self, timings }).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,measured,expected,pass,anchor,note\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(&r.name),
                r.measured,
                csv_field(&r.relation.expected()),
                r.pass,
                csv_field(r.anchor),
                csv_field(r.note.as_deref().unwrap_or("")),
            ));
        }
        out
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Relation::Near { expected: 1.0, tol: 0.1 }.holds(1.05));
        assert!(!Relation::Below { bound: 1.0 }.holds(1.0));
        assert!(Relation::AtLeast { bound: 1.0 }.holds(1.0));
        assert!(!Relation::Within { lo: 0.0, hi: 1.0 }.holds(f64::NAN));
    }

    #[test]
    fn body_excludes_timings() {
        let mut r = Report::new("selftest");
        r.push(CheckRecord::exact("deg", 16, 16, "tk_degree"));
        let before = r.body_json();
        r.time("total", 1.23);
        assert_eq!(before, r.body_json());
        assert!(r.to_json().contains("timings"));
        assert!(r.all_pass());
    }

    #[test]
    fn every_anchor_key_is_unique() {
        for (i, (k, _)) in ANCHORS.iter().enumerate() {
            assert!(ANCHORS[i + 1..].iter().all(|(o, _)| o != k));
        }
    }
}
