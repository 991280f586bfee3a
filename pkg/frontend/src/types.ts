// Shapes mirrored from the service JSON. The client renders these verbatim
// and never derives game facts on its own.

export type GameKind = "goose" | "parchis" | "motor";
export type Speed = "normal" | "fast";
export type DiceMode = "manual" | "auto";

export type Phase =
  | { name: "await_roll" }
  | { name: "await_answer"; face: number }
  | { name: "await_move_choice"; face: number; movable: number[]; bonus: boolean }
  | { name: "game_over"; winner: number };

export type PawnLocation =
  | { kind: "on_track"; square: number }
  | { kind: "in_corridor"; step: number }
  | { kind: "at_home" }
  | { kind: "finished" };

export interface PawnView {
  pawn_id: number;
  team: number;
  location: PawnLocation;
}

export interface QuestionView {
  id: string;
  topic_id: string;
  topic_label: string;
  prompt: string;
  options: string[];
  image_url: string | null;
}

export interface ConfigView {
  kind: GameKind;
  team_count: number;
  topics_per_team: string[][];
  speed: Speed;
  dice_mode: DiceMode;
  language: string;
}

export interface GameEvent {
  type: string;
  [key: string]: unknown;
}

export interface StateView {
  session_id: string;
  phase: Phase;
  current_team: number;
  turn_number: number;
  last_face: number | null;
  winner: number | null;
  config: ConfigView;
  pawns: PawnView[];
  question: QuestionView | null;
  events: GameEvent[];
}

export interface GameConfigRequest {
  kind: GameKind;
  team_count: number;
  topics_per_team: string[][];
  speed: Speed;
  dice_mode: DiceMode;
  language: string;
  seed?: number;
}

export type Action =
  | { type: "roll" }
  | { type: "answer"; choice: number }
  | { type: "choose_pawn"; pawn_id: number };

export interface TopicInfo {
  id: string;
  label: string;
  question_count: number;
}

export interface BankCatalog {
  languages: { language: string; topics: TopicInfo[] }[];
}

export interface BoardEffect {
  square: number;
  effect: string;
  target?: number;
  extra_roll?: boolean;
  turns?: number;
}

export interface BoardDoc {
  kind: GameKind;
  square_count: number;
  goal?: number;
  effects?: BoardEffect[];
  start_squares?: number[];
  safe_squares?: number[];
  ring_steps?: number;
  corridor_length?: number;
}
