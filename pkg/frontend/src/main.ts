import { HttpApi } from "./api.js";
import { ConsoleStore } from "./store.js";
import { mount } from "./view.js";

const store = new ConsoleStore(new HttpApi(""));
mount(store, document.getElementById("app") as HTMLElement);
void store.loadModel();
