export interface Point {
  x: number;
  y: number;
}

export interface ViewBox {
  minX: number;
  minY: number;
  width: number;
  height: number;
}

export type Gesture = 'click' | 'line' | 'freehand';

export type Scheme =
  | { mode: 'data'; direction: 'ascending' | 'descending'; basis: 'rank' | 'value'; attribute?: string }
  | { mode: 'layout-radius'; center: [number, number] }
  | { mode: 'layout-projection'; start: [number, number]; end: [number, number] }
  | { mode: 'layout-sketch'; polyline: [number, number][] }
  | { mode: 'layer'; direction: 'ascending' | 'descending' }
  | { mode: 'random'; seed: number };

export interface KeyframeJson {
  offset: number;
  value: number | string;
  easing?: string;
}

export interface TrackJson {
  property: string;
  keyframes: KeyframeJson[];
}

export interface ClipJson {
  selector: string;
  title: string;
  description: string;
  loop: boolean;
  tracks: TrackJson[];
}

export interface GroupClipJson {
  clip: ClipJson;
  delay: number;
  duration: number;
  offset: number;
  coordination: Scheme;
}

export interface WarningJson {
  channel: string;
  selector: string;
  rationale: string;
  severity: string;
}

export interface VersionJson {
  id: number;
  clips: GroupClipJson[];
  origin_message: number | null;
  base_versions: number[];
  warnings: WarningJson[];
}

export interface HistoryEntryJson {
  role: string;
  text: string;
  referred_versions: number[];
  produced_version: number | null;
  timestamp: number;
}

/** Per-element property state at one time; keys are element indices. */
export interface SnapshotJson {
  time: number;
  values: Record<string, Record<string, number | string>>;
}

export interface ViewState {
  sessionId: string | null;
  activeVersion: number | null;
  playhead: number;
  playing: boolean;
  pendingSketch: Point[] | null;
  selectedTrack: number | null;
}
