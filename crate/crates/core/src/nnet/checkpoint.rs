//! Model checkpoint file.
//!
//! A UTF-8 header of `key value` lines, terminated by an empty line, followed
//! by the parameters as little-endian IEEE-754 `f32` values:
//!
//! ```text
//! lingaff-mlp 1
//! input_width <n>
//! hidden_width <h>
//! classes <K>
//! family <name>            (K lines, class index order)
//! config <json TrainConfig>
//! best_score <f64>
//! best_epoch <n>
//! epochs_run <n>
//! payload f32le <count>
//!
//! <count * 4 bytes: W1, b1, W2, b2, W3, b3, each row-major>
//! ```

use std::fs;
use std::path::Path;

use super::params::{MlpParams, HIDDEN_PER_CLASS};
use super::train::{TrainConfig, TrainedModel};
use crate::encode::FamilyTable;
use crate::error::{Error, Result};

const MAGIC: &str = "lingaff-mlp 1";

pub fn to_bytes(model: &TrainedModel) -> Result<Vec<u8>> {
    let p = &model.params;
    let mut header = format!(
        "{MAGIC}\ninput_width {}\nhidden_width {}\nclasses {}\n",
        p.input_width(),
        p.hidden_width(),
        p.classes()
    );
    for name in model.families.names() {
        if name.contains('\n') {
            return Err(Error::Checkpoint(format!(
                "family name {name:?} contains a newline"
            )));
        }
        header.push_str(&format!("family {name}\n"));
    }
    header.push_str(&format!(
        "config {}\nbest_score {}\nbest_epoch {}\nepochs_run {}\npayload f32le {}\n\n",
        serde_json::to_string(&model.config)?,
        model.best_score,
        model.best_epoch,
        model.epochs_run,
        p.parameter_count()
    ));
    let mut out = header.into_bytes();
    for tensor in p.tensors() {
        for v in tensor {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn from_bytes(bytes: &[u8]) -> Result<TrainedModel> {
    let split = bytes
        .windows(2)
        .position(|w| w == b"\n\n")
        .ok_or_else(|| Error::Checkpoint("header terminator not found".into()))?;
    let header = std::str::from_utf8(&bytes[..split])
        .map_err(|_| Error::Checkpoint("header is not UTF-8".into()))?;
    let payload = &bytes[split + 2..];

    let mut lines = header.lines();
    if lines.next() != Some(MAGIC) {
        return Err(Error::Checkpoint("not a lingaff-mlp v1 file".into()));
    }
    let mut fields: Vec<(&str, &str)> = Vec::new();
    let mut families = Vec::new();
    for line in lines {
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| Error::Checkpoint(format!("malformed header line {line:?}")))?;
        if key == "family" {
            families.push(value.to_string());
        } else {
            fields.push((key, value));
        }
    }
    let field = |key: &str| -> Result<&str> {
        fields
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Checkpoint(format!("missing header field {key}")))
    };
    let number = |key: &str| -> Result<usize> {
        field(key)?
            .parse()
            .map_err(|_| Error::Checkpoint(format!("bad value for {key}")))
    };

    let input_width = number("input_width")?;
    let hidden = number("hidden_width")?;
    let classes = number("classes")?;
    if hidden != HIDDEN_PER_CLASS * classes || families.len() != classes {
        return Err(Error::Checkpoint("inconsistent dimensions".into()));
    }
    let config: TrainConfig = serde_json::from_str(field("config")?)?;
    let best_score: f64 = field("best_score")?
        .parse()
        .map_err(|_| Error::Checkpoint("bad best_score".into()))?;
    let count: usize = field("payload")?
        .strip_prefix("f32le ")
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| Error::Checkpoint("bad payload field".into()))?;

    let mut params = MlpParams::<f32>::zeros(input_width, classes);
    if count != params.parameter_count() || payload.len() != count * 4 {
        return Err(Error::Checkpoint(format!(
            "payload holds {} bytes, expected {}",
            payload.len(),
            params.parameter_count() * 4
        )));
    }
    let mut values = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]));
    for tensor in params.tensors_mut() {
        for v in tensor.iter_mut() {
            *v = values.next().expect("length checked");
        }
    }
    let table = FamilyTable::new(families.iter().cloned());
    if table.names() != families.as_slice() {
        return Err(Error::Checkpoint(
            "family names are not sorted and unique".into(),
        ));
    }
    Ok(TrainedModel {
        params,
        families: table,
        best_score,
        best_epoch: number("best_epoch")?,
        epochs_run: number("epochs_run")?,
        config,
    })
}

pub fn save(model: &TrainedModel, path: &Path) -> Result<()> {
    fs::write(path, to_bytes(model)?).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<TrainedModel> {
    from_bytes(&fs::read(path).map_err(|e| Error::io(path, e))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nnet::init_params;

    fn model() -> TrainedModel {
        TrainedModel {
            params: init_params(4, 5, 3).unwrap(),
            families: FamilyTable::new(["Austronesian", "Isolate", "Sino-Tibetan"]),
            best_score: 0.8125,
            best_epoch: 17,
            epochs_run: 517,
            config: TrainConfig::default().with_seed(4),
        }
    }

    #[test]
    fn round_trip() {
        let m = model();
        let bytes = to_bytes(&m).unwrap();
        assert_eq!(from_bytes(&bytes).unwrap(), m);
    }

    #[test]
    fn header_and_payload_layout() {
        let m = model();
        let bytes = to_bytes(&m).unwrap();
        let text = String::from_utf8_lossy(&bytes);
        assert!(text.starts_with(
            "lingaff-mlp 1\ninput_width 5\nhidden_width 12\nclasses 3\nfamily Austronesian\n"
        ));
        let n = m.params.parameter_count();
        assert_eq!(n, 5 * 12 + 12 + 12 * 12 + 12 + 12 * 3 + 3);
        let first = &bytes[bytes.len() - 4 * n..][..4];
        assert_eq!(first, m.params.w1.as_slice()[0].to_le_bytes());
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let bytes = to_bytes(&model()).unwrap();
        assert!(matches!(
            from_bytes(&bytes[..bytes.len() - 1]),
            Err(Error::Checkpoint(_))
        ));
        assert!(from_bytes(b"garbage\n\n").is_err());
    }
}
