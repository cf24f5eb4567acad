//! Instance files and synthetic generators.
//!
//! A data directory holds one dataset:
//! - `graph.tsv`: `u<TAB>v<TAB>w` per line with 0-based ids. Blank lines and
//!   `#` comments are skipped; a `# nodes N` comment fixes the node count.
//!   Optional `costs.tsv` holds `u<TAB>c` for cut instances.
//! - `similarity.csv`: dense n×n matrix, plus optional `pixels.csv` (one
//!   image per row) and `labels.csv` (one category per line).
//! - `movies.csv`: `id,rating,genres,q1..q25` with a header row and
//!   `|`-separated genre names.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use parsubmod::objectives::random::{cut_edges, digraph_arcs, feature_table, pixel_vectors, uniform_costs};
use parsubmod::objectives::{FeatureTable, FEATURE_DIM};
use parsubmod::seed::stream;
use parsubmod::{ElementId, SimilarityMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const GRAPH_FILE: &str = "graph.tsv";
pub const COSTS_FILE: &str = "costs.tsv";
pub const SIMILARITY_FILE: &str = "similarity.csv";
pub const PIXELS_FILE: &str = "pixels.csv";
pub const LABELS_FILE: &str = "labels.csv";
pub const MOVIES_FILE: &str = "movies.csv";

/// Pixels per generated image.
const IMAGE_DIM: usize = 48;
const IMAGE_CLASSES: usize = 3;
const MOVIE_GENRES: usize = 3;
const REVENUE_OUT_DEGREE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Revenue,
    Cut,
    Image,
    Movie,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(ElementId, ElementId, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Dataset {
    Graph {
        graph: Graph,
        costs: Option<Vec<f64>>,
    },
    Images {
        similarity: SimilarityMatrix,
        pixels: Option<Vec<Vec<f64>>>,
        labels: Option<Vec<usize>>,
    },
    Movies(FeatureTable),
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self {
            Dataset::Graph { graph, .. } => graph.n,
            Dataset::Images { similarity, .. } => similarity.len(),
            Dataset::Movies(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Seeded synthetic dataset of `n` elements.
pub fn generate(kind: DatasetKind, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(HarnessError::Input("n must be at least 1".into()));
    }
    let mut rng = stream(seed, &[]);
    Ok(match kind {
        DatasetKind::Revenue => Dataset::Graph {
            graph: Graph {
                n,
                edges: digraph_arcs(n, REVENUE_OUT_DEGREE, &mut rng),
            },
            costs: None,
        },
        DatasetKind::Cut => {
            let density = (8.0 / n as f64).min(1.0);
            let edges = cut_edges(n, density, &mut rng);
            let costs = uniform_costs(n, 0.1, 1.0, &mut rng);
            Dataset::Graph {
                graph: Graph { n, edges },
                costs: Some(costs),
            }
        }
        DatasetKind::Image => {
            let (pixels, labels) = pixel_vectors(n, IMAGE_DIM, IMAGE_CLASSES, &mut rng);
            Dataset::Images {
                similarity: SimilarityMatrix::cosine(&pixels)?,
                pixels: Some(pixels),
                labels: Some(labels),
            }
        }
        DatasetKind::Movie => Dataset::Movies(feature_table(n, MOVIE_GENRES, &mut rng)),
    })
}

/// Writes `data` into `dir`, creating it. Returns the files written.
pub fn write_dataset(data: &Dataset, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut files = Vec::new();
    let mut emit = |name: &str, text: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
        files.push(path);
        Ok(())
    };
    match data {
        Dataset::Graph { graph, costs } => {
            let mut s = format!("# nodes {}\n", graph.n);
            for (u, v, w) in &graph.edges {
                writeln!(s, "{u}\t{v}\t{w}").unwrap();
            }
            emit(GRAPH_FILE, s)?;
            if let Some(costs) = costs {
                let mut s = String::new();
                for (u, c) in costs.iter().enumerate() {
                    writeln!(s, "{u}\t{c}").unwrap();
                }
                emit(COSTS_FILE, s)?;
            }
        }
        Dataset::Images {
            similarity,
            pixels,
            labels,
        } => {
            emit(
                SIMILARITY_FILE,
                rows_csv((0..similarity.len()).map(|u| similarity.row(u))),
            )?;
            if let Some(pixels) = pixels {
                emit(PIXELS_FILE, rows_csv(pixels.iter().map(Vec::as_slice)))?;
            }
            if let Some(labels) = labels {
                emit(LABELS_FILE, labels.iter().map(|l| format!("{l}\n")).collect())?;
            }
        }
        Dataset::Movies(table) => {
            let mut s = String::from("id,rating,genres");
            for j in 1..=FEATURE_DIM {
                write!(s, ",q{j}").unwrap();
            }
            s.push('\n');
            for u in 0..table.len() {
                let genres: Vec<&str> = table.genres[u].iter().map(|&g| table.genre_names[g].as_str()).collect();
                write!(s, "{u},{},{}", table.ratings[u], genres.join("|")).unwrap();
                for x in &table.features[u] {
                    write!(s, ",{x}").unwrap();
                }
                s.push('\n');
            }
            emit(MOVIES_FILE, s)?;
        }
    }
    Ok(files)
}

fn rows_csv<'a>(rows: impl Iterator<Item = &'a [f64]>) -> String {
    let mut s = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Loads the dataset a problem of `kind` needs from `dir`.
pub fn load_dataset(kind: DatasetKind, dir: &Path) -> Result<Dataset> {
    match kind {
        DatasetKind::Revenue | DatasetKind::Cut => {
            let graph = read_graph(&dir.join(GRAPH_FILE))?;
            let costs_path = dir.join(COSTS_FILE);
            let costs = if kind == DatasetKind::Cut && costs_path.exists() {
                Some(read_costs(&costs_path, graph.n)?)
            } else {
                None
            };
            Ok(Dataset::Graph { graph, costs })
        }
        DatasetKind::Image => {
            let path = dir.join(SIMILARITY_FILE);
            let rows = read_float_rows(&path)?;
            let n = rows.len();
            if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                return Err(HarnessError::at(
                    &path,
                    i + 1,
                    format!("expected {n} columns, found {}", r.len()),
                ));
            }
            let similarity = SimilarityMatrix::from_rows(rows).map_err(|e| HarnessError::io(&path, e))?;
            let pixels_path = dir.join(PIXELS_FILE);
            let pixels = if pixels_path.exists() {
                let px = read_float_rows(&pixels_path)?;
                if px.len() != n {
                    return Err(HarnessError::io(
                        &pixels_path,
                        format!("{} images for {n} similarity rows", px.len()),
                    ));
                }
                Some(px)
            } else {
                None
            };
            let labels_path = dir.join(LABELS_FILE);
            let labels = if labels_path.exists() {
                Some(read_labels(&labels_path, n)?)
            } else {
                None
            };
            Ok(Dataset::Images {
                similarity,
                pixels,
                labels,
            })
        }
        DatasetKind::Movie => Ok(Dataset::Movies(read_movies(&dir.join(MOVIES_FILE))?)),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn parse<T: std::str::FromStr>(path: &Path, line: usize, field: &str, what: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| HarnessError::at(path, line, format!("invalid {what} {field:?}")))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = read_text(path)?;
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(count) = comment.trim().strip_prefix("nodes") {
                declared = Some(parse::<usize>(path, line, count, "node count")?);
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 3 {
            return Err(HarnessError::at(
                path,
                line,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let u: ElementId = parse(path, line, fields[0], "node id")?;
        let v: ElementId = parse(path, line, fields[1], "node id")?;
        let w: f64 = parse(path, line, fields[2], "weight")?;
        if !(w.is_finite() && w >= 0.0) {
            return Err(HarnessError::at(
                path,
                line,
                format!("weight must be finite and non-negative, got {w}"),
            ));
        }
        if let Some(n) = declared {
            if u as usize >= n || v as usize >= n {
                return Err(HarnessError::at(
                    path,
                    line,
                    format!("node id out of range for {n} nodes"),
                ));
            }
        }
        edges.push((u, v, w));
    }
    let seen = edges.iter().map(|&(u, v, _)| u.max(v) as usize + 1).max().unwrap_or(0);
    let n = declared.unwrap_or(seen);
    if n == 0 {
        return Err(HarnessError::io(path, "graph has no nodes"));
    }
    Ok(Graph { n, edges })
}

fn read_costs(path: &Path, n: usize) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    let mut costs = vec![None; n];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 2 {
            return Err(HarnessError::at(path, line, "expected `id<TAB>cost`"));
        }
        let u: usize = parse(path, line, fields[0], "node id")?;
        let c: f64 = parse(path, line, fields[1], "cost")?;
        if u >= n {
            return Err(HarnessError::at(
                path,
                line,
                format!("node id out of range for {n} nodes"),
            ));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(HarnessError::at(path, line, format!("cost must be positive, got {c}")));
        }
        costs[u] = Some(c);
    }
    costs
        .into_iter()
        .enumerate()
        .map(|(u, c)| c.ok_or_else(|| HarnessError::io(path, format!("no cost for node {u}"))))
        .collect()
}

fn read_float_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = read_text(path)?;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let row = raw
            .split(',')
            .map(|x| parse::<f64>(path, i + 1, x, "number"))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn read_labels(path: &Path, n: usize) -> Result<Vec<usize>> {
    let text = read_text(path)?;
    let labels = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse::<usize>(path, i + 1, l, "label"))
        .collect::<Result<Vec<usize>>>()?;
    if labels.len() != n {
        return Err(HarnessError::io(
            path,
            format!("{} labels for {n} images", labels.len()),
        ));
    }
    Ok(labels)
}

pub fn read_movies(path: &Path) -> Result<FeatureTable> {
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim_start().starts_with("id,") => {}
        _ => return Err(HarnessError::at(path, 1, "missing header `id,rating,genres,q1..q25`")),
    }
    let mut names: Vec<String> = Vec::new();
    let mut features = Vec::new();
    let mut ratings = Vec::new();
    let mut genres = Vec::new();
    for (i, raw) in lines {
        let line = i + 1;
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 3 + FEATURE_DIM {
            return Err(HarnessError::at(
                path,
                line,
                format!("expected {} fields, found {}", 3 + FEATURE_DIM, fields.len()),
            ));
        }
        let id: usize = parse(path, line, fields[0], "id")?;
        if id != ratings.len() {
            return Err(HarnessError::at(
                path,
                line,
                format!("expected id {}, found {id}", ratings.len()),
            ));
        }
        let rating: f64 = parse(path, line, fields[1], "rating")?;
        if !(0.0..=10.0).contains(&rating) {
            return Err(HarnessError::at(
                path,
                line,
                format!("rating must be in [0, 10], got {rating}"),
            ));
        }
        let mut tags = Vec::new();
        for name in fields[2].split('|').map(str::trim).filter(|s| !s.is_empty()) {
            let g = match names.iter().position(|n| n == name) {
                Some(g) => g,
                None => {
                    names.push(name.to_string());
                    names.len() - 1
                }
            };
            if !tags.contains(&g) {
                tags.push(g);
            }
        }
        if tags.is_empty() {
            return Err(HarnessError::at(path, line, "movie has no genre"));
        }
        let q = fields[3..]
            .iter()
            .map(|x| parse::<f64>(path, line, x, "feature"))
            .collect::<Result<Vec<f64>>>()?;
        features.push(q);
        ratings.push(rating);
        genres.push(tags);
    }
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let mut rank = vec![0; names.len()];
    for (r, &g) in order.iter().enumerate() {
        rank[g] = r;
    }
    for tags in &mut genres {
        for g in tags.iter_mut() {
            *g = rank[*g];
        }
        tags.sort_unstable();
    }
    let names = order.into_iter().map(|g| names[g].clone()).collect();
    FeatureTable::new(features, ratings, genres, names).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn every_kind_round_trips() {
        for kind in [
            DatasetKind::Revenue,
            DatasetKind::Cut,
            DatasetKind::Image,
            DatasetKind::Movie,
        ] {
            let dir = tmp();
            let data = generate(kind, 15, 7).unwrap();
            write_dataset(&data, dir.path()).unwrap();
            assert_eq!(load_dataset(kind, dir.path()).unwrap(), data, "{kind:?}");
        }
    }

    #[test]
    fn generation_is_seeded() {
        let a = generate(DatasetKind::Revenue, 50, 7).unwrap();
        assert_eq!(a, generate(DatasetKind::Revenue, 50, 7).unwrap());
        assert_ne!(a, generate(DatasetKind::Revenue, 50, 8).unwrap());
        let Dataset::Graph { graph, .. } = a else { panic!() };
        assert!(graph.edges.iter().all(|e| (0.0..1.0).contains(&e.2)));
        assert!(generate(DatasetKind::Cut, 0, 1).is_err());
    }

    #[test]
    fn graph_parsing() {
        let dir = tmp();
        let p = dir.path().join("g.tsv");
        fs::write(&p, "# a comment\n0\t1\t0.5\n\n2\t1\t1\n").unwrap();
        let g = read_graph(&p).unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.edges, vec![(0, 1, 0.5), (2, 1, 1.0)]);

        fs::write(&p, "# nodes 5\n0\t1\t0.5\n").unwrap();
        assert_eq!(read_graph(&p).unwrap().n, 5);

        fs::write(&p, "0\t1\t0.5\n1\t2\n").unwrap();
        let e = read_graph(&p).unwrap_err().to_string();
        assert!(e.ends_with("g.tsv:2: expected 3 tab-separated fields, found 2"), "{e}");

        fs::write(&p, "0\t1\tx\n").unwrap();
        assert!(read_graph(&p).unwrap_err().to_string().contains(":1: invalid weight"));

        fs::write(&p, "0\t1\t-1\n").unwrap();
        assert!(read_graph(&p).is_err());

        fs::write(&p, "# nodes 2\n0\t2\t1\n").unwrap();
        assert!(read_graph(&p)
            .unwrap_err()
            .to_string()
            .contains(":2: node id out of range"));

        assert!(read_graph(&dir.path().join("missing.tsv")).is_err());
    }

    #[test]
    fn movie_parsing_errors_carry_line_numbers() {
        let dir = tmp();
        let p = dir.path().join(MOVIES_FILE);
        let q = vec!["0.5"; FEATURE_DIM].join(",");
        fs::write(&p, format!("id,rating,genres\n0,7,a|b,{q}\n1,11,a,{q}\n")).unwrap();
        assert!(read_movies(&p)
            .unwrap_err()
            .to_string()
            .contains(":3: rating must be in [0, 10]"));
        fs::write(&p, format!("id,rating,genres\n0,7,a|b,{q}\n1,3,b,0.1\n")).unwrap();
        assert!(read_movies(&p)
            .unwrap_err()
            .to_string()
            .contains(":3: expected 28 fields"));
        fs::write(&p, format!("id,rating,genres\n0,7,b|a,{q}\n1,3,b,{q}\n")).unwrap();
        let t = read_movies(&p).unwrap();
        assert_eq!(t.genres, vec![vec![0, 1], vec![1]]);
        assert_eq!(t.genre_names, vec!["a", "b"]);
    }

    #[test]
    fn similarity_must_be_square() {
        let dir = tmp();
        fs::write(dir.path().join(SIMILARITY_FILE), "1,0.5\n0.5\n").unwrap();
        let e = load_dataset(DatasetKind::Image, dir.path()).unwrap_err().to_string();
        assert!(e.contains("similarity.csv:2: expected 2 columns"), "{e}");
    }
}
