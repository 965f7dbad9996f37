//! Binary PGM ("P5") and PPM ("P6") decoding and directory loading.
//!
//! Expected layout: `root/{train,test}/<class_name>/*.pgm|*.ppm`, 8-bit
//! binary images only. Classes are assigned indices in lexicographic order of
//! their directory names; sample order is sorted-path order.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::data::{DatasetSplit, Sample};
use crate::error::{Error, Result};
use crate::nn::FeatureTensor;

struct RawImage {
    channels: usize,
    width: usize,
    height: usize,
    bytes: Vec<u8>,
}

fn data_err(path: &Path, msg: &str) -> Error {
    Error::Data(format!("{}: {msg}", path.display()))
}

/// Parse the P5/P6 header: magic, dims, maxval, separated by whitespace with
/// `#` comments allowed, then a single whitespace byte before the raster.
fn decode_netpbm(path: &Path, bytes: &[u8]) -> Result<RawImage> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        _ => return Err(data_err(path, "not a binary PGM (P5) or PPM (P6) file")),
    };
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        // skip whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(data_err(path, "truncated header")),
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == start {
            return Err(data_err(path, "malformed header field"));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| data_err(path, "malformed header field"))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(data_err(path, &format!("only 8-bit images supported (maxval {maxval})")));
    }
    if width == 0 || height == 0 {
        return Err(data_err(path, "zero-sized image"));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(data_err(path, "missing raster separator")),
    }
    let expected = width * height * channels;
    let raster = bytes
        .get(pos..pos + expected)
        .ok_or_else(|| data_err(path, "truncated raster"))?;
    Ok(RawImage { channels, width, height, bytes: raster.to_vec() })
}

/// Center-crop to a square, nearest-neighbor resize to `side`, scale to
/// [0, 1], and deinterleave into channel-major order.
fn to_tensor(img: &RawImage, side: usize) -> Result<FeatureTensor> {
    let crop = img.width.min(img.height);
    let off_x = (img.width - crop) / 2;
    let off_y = (img.height - crop) / 2;
    let mut data = vec![0.0; img.channels * side * side];
    for c in 0..img.channels {
        for i in 0..side {
            for j in 0..side {
                let src_y = off_y + i * crop / side;
                let src_x = off_x + j * crop / side;
                let byte = img.bytes[(src_y * img.width + src_x) * img.channels + c];
                data[(c * side + i) * side + j] = f64::from(byte) / 255.0;
            }
        }
    }
    FeatureTensor::new(img.channels, side, side, data)
}

/// Decode one image file into a [0, 1]-valued tensor of shape C x side x side.
pub(crate) fn load_image(path: &Path, side: usize) -> Result<FeatureTensor> {
    let bytes = fs::read(path).map_err(|e| data_err(path, &e.to_string()))?;
    let raw = decode_netpbm(path, &bytes)?;
    to_tensor(&raw, side)
}

fn sorted_dirs(path: &Path) -> Result<Vec<PathBuf>> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| data_err(path, &e.to_string()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    Ok(dirs)
}

fn sorted_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| data_err(dir, &e.to_string()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            matches!(
                p.extension().and_then(|e| e.to_str()),
                Some("pgm") | Some("ppm")
            )
        })
        .collect();
    files.sort();
    Ok(files)
}

fn load_split(split_dir: &Path, side: usize) -> Result<(Vec<Sample>, Vec<String>)> {
    let class_dirs = sorted_dirs(split_dir)?;
    let mut names = Vec::new();
    let mut samples = Vec::new();
    for (label, dir) in class_dirs.iter().enumerate() {
        let name = dir
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| data_err(dir, "class directory name is not UTF-8"))?
            .to_string();
        names.push(name);
        for file in sorted_images(dir)? {
            samples.push(Sample { image: load_image(&file, side)?, label });
        }
    }
    Ok((samples, names))
}

/// Load `root/{train,test}/<class>/*.pgm|*.ppm` into a dataset split.
///
/// The class-name sets of the two splits must be identical; all images must
/// share one channel count so a single model can consume them.
pub fn load_image_dir(root: &Path, image_side: usize) -> Result<DatasetSplit> {
    if image_side < 1 {
        return Err(Error::Config("image_side must be >= 1".into()));
    }
    let (train, train_names) = load_split(&root.join("train"), image_side)?;
    let (test, test_names) = load_split(&root.join("test"), image_side)?;
    if train_names != test_names {
        return Err(Error::Data(format!(
            "class sets differ between splits: train {train_names:?} vs test {test_names:?}"
        )));
    }
    let mut channel_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for sample in train.iter().chain(&test) {
        *channel_counts.entry(sample.image.channels()).or_default() += 1;
    }
    if channel_counts.len() > 1 {
        return Err(Error::Data(format!(
            "mixed grayscale/color images in one dataset: channel counts {channel_counts:?}"
        )));
    }
    if train.is_empty() || test.is_empty() {
        return Err(Error::Data("both splits must be non-empty".into()));
    }
    Ok(DatasetSplit { train, test, class_names: train_names })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_pgm(path: &Path, width: usize, height: usize, bytes: &[u8]) {
        let mut f = fs::File::create(path).unwrap();
        write!(f, "P5\n{width} {height}\n255\n").unwrap();
        f.write_all(bytes).unwrap();
    }

    #[test]
    fn p5_bytes_scale_to_unit_interval() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        write_pgm(&path, 2, 2, &[0, 255, 0, 255]);
        let tensor = load_image(&path, 2).unwrap();
        assert_eq!(tensor.values(), &[0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn p6_deinterleaves_channels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.ppm");
        let mut f = fs::File::create(&path).unwrap();
        write!(f, "P6\n1 1\n255\n").unwrap();
        f.write_all(&[255, 0, 128]).unwrap();
        drop(f);
        let tensor = load_image(&path, 1).unwrap();
        assert_eq!(tensor.shape(), (3, 1, 1));
        assert_eq!(tensor.values()[0], 1.0);
        assert_eq!(tensor.values()[1], 0.0);
        assert!((tensor.values()[2] - 128.0 / 255.0).abs() < 1e-12);
    }

    #[test]
    fn non_8bit_depth_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        let mut f = fs::File::create(&path).unwrap();
        write!(f, "P5\n1 1\n65535\n").unwrap();
        f.write_all(&[0, 0]).unwrap();
        drop(f);
        let err = load_image(&path, 1).unwrap_err();
        assert!(err.to_string().contains("img.pgm"));
    }

    #[test]
    fn comments_in_header_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        let mut f = fs::File::create(&path).unwrap();
        write!(f, "P5\n# made by hand\n2 1\n# depth\n255\n").unwrap();
        f.write_all(&[10, 20]).unwrap();
        drop(f);
        assert!(load_image(&path, 1).is_ok());
    }

    fn make_dataset(root: &Path, classes_train: &[&str], classes_test: &[&str]) {
        for (split, classes) in [("train", classes_train), ("test", classes_test)] {
            for class in classes {
                let dir = root.join(split).join(class);
                fs::create_dir_all(&dir).unwrap();
                write_pgm(&dir.join("a.pgm"), 2, 2, &[1, 2, 3, 4]);
            }
        }
    }

    #[test]
    fn classes_sorted_lexicographically() {
        let dir = tempfile::tempdir().unwrap();
        make_dataset(dir.path(), &["b", "a"], &["a", "b"]);
        let split = load_image_dir(dir.path(), 2).unwrap();
        assert_eq!(split.class_names, vec!["a", "b"]);
        assert_eq!(split.train[0].label, 0);
        assert_eq!(split.train[1].label, 1);
    }

    #[test]
    fn mismatched_class_sets_error() {
        let dir = tempfile::tempdir().unwrap();
        make_dataset(dir.path(), &["a", "b", "c"], &["a", "b"]);
        assert!(matches!(load_image_dir(dir.path(), 2), Err(Error::Data(_))));
    }

    #[test]
    fn center_crop_and_resize() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        // 4x2: crop takes the middle 2x2 (columns 1..3)
        write_pgm(&path, 4, 2, &[0, 10, 20, 30, 40, 50, 60, 70]);
        let tensor = load_image(&path, 2).unwrap();
        assert_eq!(
            tensor.values(),
            &[10.0 / 255.0, 20.0 / 255.0, 50.0 / 255.0, 60.0 / 255.0]
        );
    }
}
